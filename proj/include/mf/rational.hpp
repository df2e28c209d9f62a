#ifndef MF_RATIONAL_HPP
#define MF_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace mf {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;  // row-major

/// Nearest multiple of 1/denominator to x (ties away from zero), exactly.
Rational quantize(double x, const mpz_class& denominator);

/// "num/den" (or "num" for integers).
std::string to_string(const Rational& q);
Rational rational_from_string(const std::string& text);

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
std::vector<std::size_t> rref(RationalMatrix& m);

std::size_t rank(RationalMatrix m);

/// Basis of {x : M x = 0}, one vector per free column.
std::vector<RationalVector> nullspace(RationalMatrix m, std::size_t columns);

/// Some x with M x = b (free variables zero), or nullopt if inconsistent.
std::optional<RationalVector> solve(RationalMatrix m, const RationalVector& b, std::size_t columns);

}  // namespace mf

#endif  // MF_RATIONAL_HPP
