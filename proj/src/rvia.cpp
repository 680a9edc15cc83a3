#include "ehaoi/rvia.hpp"

#include <algorithm>
#include <limits>

namespace ehaoi {

double span(std::span<const double> v_new, std::span<const double> v_old) {
  if (v_new.size() != v_old.size()) throw std::invalid_argument("span: tables differ in size");
  if (v_new.empty()) return 0.0;
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v_new.size(); ++i) {
    const double d = v_new[i] - v_old[i];
    hi = std::max(hi, d);
    lo = std::min(lo, d);
  }
  return hi - lo;
}

double span(const ValueTable& v_new, const ValueTable& v_old) { return span(v_new.v, v_old.v); }

}  // namespace ehaoi
