// Builds and verifies a factorization for a generated n-gon, then prints
// the certificate. Usage: demo_certificate [n]
#include <cstdlib>
#include <iostream>

#include "polyxt/polyxt.hpp"

int main(int argc, char **argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 100;
  const auto seq = polyxt::generate_admissible(n, polyxt::gentle_profile(n));
  const auto built = polyxt::factor_admissible(seq);
  std::cout << polyxt::io::to_json(built.certificate, true).dump(2) << "\n";
  std::cout << "inner dimension " << built.factorization.inner_dim() << " for " << n << " vertices, "
            << "17 sqrt(n) = " << polyxt::ceil_c_sqrt(17, n) << "\n";
  return built.certificate.verdict ? 0 : 1;
}
