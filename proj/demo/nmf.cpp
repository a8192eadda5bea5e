// Exact nonnegative factorization of a random rank-3 matrix.
// Usage: demo_nmf [rows cols seed]
#include <cstdlib>
#include <iostream>

#include "polyxt/polyxt.hpp"

int main(int argc, char **argv) {
  const std::size_t rows = argc > 2 ? std::strtoul(argv[1], nullptr, 10) : 40;
  const std::size_t cols = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 20;
  const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;
  const auto inst = polyxt::generate_rank3_matrix(rows, cols, seed);
  const auto r = polyxt::nmf_rank3(inst.matrix);
  std::cout << "route " << r.report.route << ", slice vertices " << r.report.k << ", inner dimension "
            << r.factorization.inner_dim() << ", verified " << std::boolalpha << r.report.verified << "\n";
  return r.report.verified ? 0 : 1;
}
