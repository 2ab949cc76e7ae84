#pragma once

#include <vector>

#include "ffl/image.hpp"

namespace ffl {

/// Full-reference quality summary. Values assume the 0..255 pixel scale
/// unless a different peak is passed explicitly. psnr is +infinity for
/// identical inputs.
struct MetricReport {
    double lfd = 0.0;
    double psnr = 0.0;
    double ssim = 0.0;
    std::vector<double> lfd_per_channel;
    std::vector<double> psnr_per_channel;
    std::vector<double> ssim_per_channel;
};

/// Log frequency distance: per channel ln[(1/MN) * sum |F_r - F_f|^2 + 1] on
/// raw (un-normalized) DFT values, then averaged over channels. Equal to
/// ln(MN * MSE_c + 1) per channel when both are computed exactly.
double lfd(const ImageTensor& real, const ImageTensor& fake);
std::vector<double> lfd_per_channel(const ImageTensor& real, const ImageTensor& fake);

/// 10 log10(peak^2 / MSE) with the MSE pooled over pixels and channels.
double psnr(const ImageTensor& real, const ImageTensor& fake, double peak = 255.0);
std::vector<double> psnr_per_channel(const ImageTensor& real, const ImageTensor& fake,
                                     double peak = 255.0);

/// Mean local structural similarity: 11x11 Gaussian window (sigma 1.5),
/// C1=(0.01 peak)^2, C2=(0.03 peak)^2, valid positions only, channels
/// averaged. Requires both dimensions >= 11.
double ssim(const ImageTensor& real, const ImageTensor& fake, double peak = 255.0);
std::vector<double> ssim_per_channel(const ImageTensor& real, const ImageTensor& fake,
                                     double peak = 255.0);

MetricReport evaluate_metrics(const ImageTensor& real, const ImageTensor& fake,
                              double peak = 255.0);

}  // namespace ffl
