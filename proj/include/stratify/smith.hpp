// Smith normal form and exact linear algebra over Z.
#ifndef STRATIFY_SMITH_HPP
#define STRATIFY_SMITH_HPP

#include <optional>
#include <vector>

#include "stratify/matrix.hpp"

namespace stratify {

/// U * M * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... (all
/// diagonal entries non-negative). The inverses are tracked alongside so that
/// callers can change coordinates in both directions without re-inverting.
struct SmithForm {
  IntMatrix U, Uinv;
  IntMatrix D;
  IntMatrix V, Vinv;
  Index rank = 0;

  std::vector<Integer> diagonal() const;
};

enum class SmithTracking { None, Full };

SmithForm smith_normal_form(const IntMatrix& m, SmithTracking tracking = SmithTracking::Full);

/// Invariant factors of m (non-zero diagonal of the Smith form).
std::vector<Integer> invariant_factors(const IntMatrix& m);

Index integer_rank(const IntMatrix& m);

/// Basis of {x : m x = 0} as columns; the span is saturated in Z^n, so the
/// columns extend to a basis of Z^n.
IntMatrix integer_kernel(const IntMatrix& m);

/// Solves m X = b over Z. Returns nullopt when no integral solution exists.
std::optional<IntMatrix> integer_solve(const IntMatrix& m, const IntMatrix& b);

}  // namespace stratify

#endif  // STRATIFY_SMITH_HPP
