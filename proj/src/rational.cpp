#include "mf/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace mf {

Rational quantize(double x, const mpz_class& denominator) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot quantize a non-finite value");
  if (denominator <= 0) throw std::invalid_argument("quantization denominator must be positive");
  const Rational exact(x);  // doubles are dyadic rationals, converted exactly
  Rational scaled = exact * denominator;
  mpz_class num = abs(scaled.get_num()), den = scaled.get_den();
  // floor(|s| + 1/2)
  mpz_class rounded = (2 * num + den) / (2 * den);
  if (scaled < 0) rounded = -rounded;
  Rational out(rounded, denominator);
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_string(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0 || q.get_den() == 0)
    throw std::invalid_argument("not a rational: " + text);
  q.canonicalize();
  return q;
}

std::vector<std::size_t> rref(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t cols = m.front().size();
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    const Rational inv = 1 / m[row][c];
    for (auto& x : m[row])
      if (x != 0) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t k = c; k < cols; ++k)
        if (m[row][k] != 0) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

std::size_t rank(RationalMatrix m) { return rref(m).size(); }

std::vector<RationalVector> nullspace(RationalMatrix m, std::size_t columns) {
  for (const auto& r : m)
    if (r.size() != columns) throw std::invalid_argument("nullspace: ragged matrix");
  const auto pivots = rref(m);
  std::vector<bool> is_pivot(columns, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < columns; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(columns, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RationalVector> solve(RationalMatrix m, const RationalVector& b, std::size_t columns) {
  if (m.size() != b.size()) throw std::invalid_argument("solve: row count mismatch");
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].size() != columns) throw std::invalid_argument("solve: ragged matrix");
    m[r].push_back(b[r]);
  }
  const auto pivots = rref(m);
  if (!pivots.empty() && pivots.back() == columns) return std::nullopt;
  RationalVector x(columns, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][columns];
  return x;
}

}  // namespace mf
