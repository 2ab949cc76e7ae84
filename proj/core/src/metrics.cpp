#include "ffl/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ffl/spectral.hpp"

namespace ffl {

namespace {

void check_pair(const ImageTensor& real, const ImageTensor& fake, const char* what) {
    validate(real, what);
    validate(fake, what);
    if (!real.same_shape(fake)) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
    }
}

void check_peak(double peak, const char* what) {
    if (!(peak > 0.0) || !std::isfinite(peak)) {
        throw std::invalid_argument(std::string(what) + ": peak must be finite and > 0");
    }
}

double channel_mse(const ImageTensor& a, const ImageTensor& b, int c) {
    double acc = 0.0;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            const double d = a.at(y, x, c) - b.at(y, x, c);
            acc += d * d;
        }
    }
    return acc / (static_cast<double>(a.height) * static_cast<double>(a.width));
}

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

std::vector<double> gaussian_window() {
    std::vector<double> w(kWindow * kWindow);
    const int half = kWindow / 2;
    double sum = 0.0;
    for (int y = 0; y < kWindow; ++y) {
        for (int x = 0; x < kWindow; ++x) {
            const double dy = y - half;
            const double dx = x - half;
            const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * kSigma * kSigma));
            w[static_cast<std::size_t>(y * kWindow + x)] = v;
            sum += v;
        }
    }
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace

std::vector<double> lfd_per_channel(const ImageTensor& real, const ImageTensor& fake) {
    check_pair(real, fake, "lfd");
    const Spectrum fr = dft2(real, false);
    const Spectrum ff = dft2(fake, false);
    const double mn = static_cast<double>(real.height) * static_cast<double>(real.width);
    std::vector<double> out(static_cast<std::size_t>(real.channels), 0.0);
    for (int c = 0; c < real.channels; ++c) {
        double acc = 0.0;
        for (int v = 0; v < real.height; ++v) {
            for (int u = 0; u < real.width; ++u) {
                const std::complex<double> d = fr.at(v, u, c) - ff.at(v, u, c);
                acc += d.real() * d.real() + d.imag() * d.imag();
            }
        }
        out[static_cast<std::size_t>(c)] = std::log(acc / mn + 1.0);
    }
    return out;
}

double lfd(const ImageTensor& real, const ImageTensor& fake) {
    const std::vector<double> per = lfd_per_channel(real, fake);
    double acc = 0.0;
    for (double v : per) acc += v;
    return acc / static_cast<double>(per.size());
}

double psnr(const ImageTensor& real, const ImageTensor& fake, double peak) {
    check_pair(real, fake, "psnr");
    check_peak(peak, "psnr");
    const double mse = mean_squared_error(real, fake);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

std::vector<double> psnr_per_channel(const ImageTensor& real, const ImageTensor& fake,
                                     double peak) {
    check_pair(real, fake, "psnr");
    check_peak(peak, "psnr");
    std::vector<double> out(static_cast<std::size_t>(real.channels), 0.0);
    for (int c = 0; c < real.channels; ++c) {
        const double mse = channel_mse(real, fake, c);
        out[static_cast<std::size_t>(c)] =
            mse == 0.0 ? std::numeric_limits<double>::infinity()
                       : 10.0 * std::log10(peak * peak / mse);
    }
    return out;
}

std::vector<double> ssim_per_channel(const ImageTensor& real, const ImageTensor& fake,
                                     double peak) {
    check_pair(real, fake, "ssim");
    check_peak(peak, "ssim");
    if (real.height < kWindow || real.width < kWindow) {
        throw std::invalid_argument("ssim: image smaller than the 11x11 window");
    }
    const std::vector<double> win = gaussian_window();
    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);

    std::vector<double> out(static_cast<std::size_t>(real.channels), 0.0);
    for (int c = 0; c < real.channels; ++c) {
        double acc = 0.0;
        long positions = 0;
        for (int y0 = 0; y0 + kWindow <= real.height; ++y0) {
            for (int x0 = 0; x0 + kWindow <= real.width; ++x0) {
                double mx = 0.0, my = 0.0, mxx = 0.0, myy = 0.0, mxy = 0.0;
                for (int dy = 0; dy < kWindow; ++dy) {
                    for (int dx = 0; dx < kWindow; ++dx) {
                        const double w = win[static_cast<std::size_t>(dy * kWindow + dx)];
                        const double a = real.at(y0 + dy, x0 + dx, c);
                        const double b = fake.at(y0 + dy, x0 + dx, c);
                        mx += w * a;
                        my += w * b;
                        mxx += w * a * a;
                        myy += w * b * b;
                        mxy += w * a * b;
                    }
                }
                const double vx = mxx - mx * mx;
                const double vy = myy - my * my;
                const double cov = mxy - mx * my;
                const double num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
                const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
                acc += num / den;
                ++positions;
            }
        }
        out[static_cast<std::size_t>(c)] = acc / static_cast<double>(positions);
    }
    return out;
}

double ssim(const ImageTensor& real, const ImageTensor& fake, double peak) {
    const std::vector<double> per = ssim_per_channel(real, fake, peak);
    double acc = 0.0;
    for (double v : per) acc += v;
    return acc / static_cast<double>(per.size());
}

MetricReport evaluate_metrics(const ImageTensor& real, const ImageTensor& fake,
                              double peak) {
    MetricReport report;
    report.lfd_per_channel = lfd_per_channel(real, fake);
    report.psnr_per_channel = psnr_per_channel(real, fake, peak);
    report.ssim_per_channel = ssim_per_channel(real, fake, peak);
    report.lfd = lfd(real, fake);
    report.psnr = psnr(real, fake, peak);
    report.ssim = ssim(real, fake, peak);
    return report;
}

}  // namespace ffl
