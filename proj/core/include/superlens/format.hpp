#ifndef SUPERLENS_FORMAT_HPP
#define SUPERLENS_FORMAT_HPP

#include <complex>
#include <cstdio>
#include <string>

namespace superlens {

/// Shortest round-trippable decimal form, locale-independent. All CSV output
/// goes through this so repeated runs are byte-identical.
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Compact complex label like "-1+0.05i" for CSV headers and filenames.
inline std::string fmt_cplx(std::complex<double> z) {
  char buf[96];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof(buf), "%g", z.real());
  } else {
    std::snprintf(buf, sizeof(buf), "%g%+gi", z.real(), z.imag());
  }
  return buf;
}

}  // namespace superlens

#endif  // SUPERLENS_FORMAT_HPP
