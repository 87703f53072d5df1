#pragma once

namespace permdiag {

/// Standard normal density.
double norm_pdf(double z);

/// Standard normal CDF. Absolute error well below 1e-9 over the real line.
double norm_cdf(double z);

/// Standard normal quantile (inverse CDF) for u in (0, 1).
/// Wichura's AS 241 double-precision rational approximation, accurate to
/// about one part in 1e15. Throws std::domain_error outside (0, 1).
double norm_ppf(double u);

}  // namespace permdiag
