// Spectral decomposition of A = [[i, j], [j, -i]] over the exact quaternions.

#include "ncspec/ncspec.hpp"

#include <iostream>

using namespace ncspec;

int main() {
  const ToleranceConfig cfg{};
  const QuaternionQ i = QuaternionQ::i(), j = QuaternionQ::j();
  const NcMatrix<QuaternionQ> a{{i, j}, {j, -i}};

  auto polys = char_poly_all(a, cfg);
  for (const auto& p : polys) {
    std::cout << "row " << p.row << ":";
    for (const auto& c : p.coeffs) std::cout << ' ' << c;
    std::cout << '\n';
  }

  auto xs = solve_eigen_diagonals(a, polys, RootStrategy::zero_root_factoring, cfg);
  auto d = spectral_decompose(a, xs, cfg);
  for (std::size_t k = 0; k < d.projectors.size(); ++k) {
    std::cout << "P" << k + 1 << ":\n";
    const auto& p = d.projectors[k];
    for (std::size_t r = 1; r <= 2; ++r) std::cout << "  " << p(r, 1) << "  " << p(r, 2) << '\n';
  }

  for (double t : {0.25, 1.0}) {
    auto e = matrix_function(a, d, FunctionTag::exp, t, cfg);
    std::cout << "exp(" << t << " A):\n";
    for (std::size_t r = 1; r <= 2; ++r) std::cout << "  " << e(r, 1) << "  " << e(r, 2) << '\n';
  }
}
