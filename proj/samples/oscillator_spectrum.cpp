// Spectral data of sqrt(2) [[0, a, 0], [ad, 0, a], [0, ad, 0]] on the first Fock levels.

#include "ncspec/ncspec.hpp"

#include <cstdio>

using namespace ncspec;

int main() {
  const ToleranceConfig cfg{};
  const WeightExpr r2 = sqrt(WeightExpr(2));
  const BandOperator a = r2 * BandOperator::annihilation(), ad = r2 * BandOperator::creation(), z;
  const NcMatrix<BandOperator> m{{z, a, z}, {ad, z, a}, {z, ad, z}};

  auto polys = char_poly_all(m, cfg);
  for (const auto& p : polys)
    std::printf("row %zu: C2(n) for n = 0..4: %g %g %g %g %g%s\n", p.row, p.coeffs[1].matrix_element(0, 0).real(),
                p.coeffs[1].matrix_element(1, 1).real(), p.coeffs[1].matrix_element(2, 2).real(),
                p.coeffs[1].matrix_element(3, 3).real(), p.coeffs[1].matrix_element(4, 4).real(),
                p.degenerate ? "  (degenerate)" : "");

  auto xs = solve_eigen_diagonals(m, polys, RootStrategy::pointwise_numeric, cfg);
  auto d = spectral_decompose(m, xs, cfg);
  std::printf("residuals: idempotence %.2e, orthogonality %.2e, completeness %.2e\n", d.residuals.idempotence,
              d.residuals.orthogonality, d.residuals.completeness);

  // <n|P1_11|n> and <n-1|P1_12|n>
  for (long n = 1; n <= 4; ++n)
    std::printf("n=%ld  P1_11 %.6f  P1_12 %.6f\n", n, d.projectors[0](1, 1).matrix_element(n, n).real(),
                d.projectors[0](1, 2).matrix_element(n - 1, n).real());

  const double t = 0.3;
  auto e = matrix_function(m, d, FunctionTag::exp, Complex(0.0, -t), cfg);
  for (long n = 0; n <= 3; ++n) {
    Complex v = e(2, 2).matrix_element(n, n);
    std::printf("<%ld|exp(-i t A)_22|%ld> = %.9f %+.9fi\n", n, n, v.real(), v.imag());
  }
}
