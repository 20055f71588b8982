#include "latglob/bigint.hpp"

#include <vector>

namespace latglob {

std::string to_decimal(const Rational& q, int significant) {
  if (q == 0) return "0";
  mpf_class f(0, 512);
  f = q;
  const int size = gmp_snprintf(nullptr, 0, "%.*Fg", significant, f.get_mpf_t());
  std::vector<char> buf(static_cast<std::size_t>(size) + 1);
  gmp_snprintf(buf.data(), buf.size(), "%.*Fg", significant, f.get_mpf_t());
  return std::string(buf.data(), static_cast<std::size_t>(size));
}

}  // namespace latglob
