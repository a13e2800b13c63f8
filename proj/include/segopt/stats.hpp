#pragma once

namespace segopt {

double norm_pdf(double x);
double norm_cdf(double x);
// Inverse standard normal CDF (Wichura's AS 241, double precision).
// p must lie in (0, 1).
double norm_ppf(double p);

}  // namespace segopt
