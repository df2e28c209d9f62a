#include "mf/assignment.hpp"

#include <bit>
#include <cctype>
#include <stdexcept>

#include "mf/error.hpp"

namespace mf {

AxisAssignment::AxisAssignment(int dimension, std::uint64_t code)
    : dimension_(dimension), code_(code) {
  if (dimension < 1 || dimension > kMaxDimension)
    throw std::invalid_argument("assignment dimension must be in 1..63");
  if (code >> dimension) throw std::invalid_argument("assignment code exceeds dimension");
}

AxisAssignment AxisAssignment::from_flags(const std::vector<bool>& momentum) {
  const int n = static_cast<int>(momentum.size());
  std::uint64_t code = 0;
  for (int i = 0; i < n; ++i)
    if (momentum[i]) code |= std::uint64_t{1} << (n - 1 - i);
  return {n, code};
}

AxisAssignment AxisAssignment::flipped(int axis) const {
  if (axis < 0 || axis >= dimension_) throw std::out_of_range("axis out of range");
  return {dimension_, code_ ^ (std::uint64_t{1} << shift(axis))};
}

std::string AxisAssignment::type_string() const {
  std::string out;
  for (int i = 0; i < dimension_; ++i) {
    const int label = i + 1;
    if (label <= 9)
      out += static_cast<char>('0' + label);
    else
      out += "[" + std::to_string(label) + "]";
    if (momentum(i)) out += '\'';
  }
  return out;
}

std::string AxisAssignment::qp_string() const {
  std::string out(dimension_, 'q');
  for (int i = 0; i < dimension_; ++i)
    if (momentum(i)) out[i] = 'p';
  return out;
}

AxisAssignment parse_type(std::string_view text, int dimension) {
  if (dimension < 1 || dimension > AxisAssignment::kMaxDimension)
    throw ParseError("dimension must be in 1..63");
  std::vector<int> seen(dimension, 0);
  std::vector<bool> momentum(dimension, false);
  std::size_t pos = 0;
  const auto fail = [&](const std::string& why) {
    throw ParseError("bad type-string '" + std::string(text) + "': " + why);
  };
  while (pos < text.size()) {
    int label = 0;
    if (text[pos] == '[') {
      const auto close = text.find(']', pos);
      if (close == std::string_view::npos || close == pos + 1) fail("unterminated bracket");
      for (std::size_t k = pos + 1; k < close; ++k) {
        if (!std::isdigit(static_cast<unsigned char>(text[k]))) fail("non-digit inside brackets");
        label = label * 10 + (text[k] - '0');
        if (label > AxisAssignment::kMaxDimension) fail("axis index out of range");
      }
      pos = close + 1;
    } else if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
      label = text[pos] - '0';
      ++pos;
    } else {
      fail(text[pos] == '\'' ? "prime without axis" : "unexpected character");
    }
    if (label < 1 || label > dimension) fail("axis index out of range");
    if (seen[label - 1]++) fail("duplicate axis " + std::to_string(label));
    if (pos < text.size() && text[pos] == '\'') {
      momentum[label - 1] = true;
      ++pos;
      if (pos < text.size() && text[pos] == '\'') fail("doubled prime");
    }
  }
  for (int i = 0; i < dimension; ++i)
    if (!seen[i]) fail("missing axis " + std::to_string(i + 1));
  return AxisAssignment::from_flags(momentum);
}

AxisAssignment parse_qp(std::string_view text) {
  if (text.empty() || text.size() > AxisAssignment::kMaxDimension)
    throw ParseError("bad q/p string length");
  std::vector<bool> momentum;
  for (char c : text) {
    if (c != 'q' && c != 'p') throw ParseError("bad q/p string '" + std::string(text) + "'");
    momentum.push_back(c == 'p');
  }
  return AxisAssignment::from_flags(momentum);
}

int distance(const AxisAssignment& a, const AxisAssignment& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch");
  return std::popcount(a.code() ^ b.code());
}

std::vector<int> differing_axes(const AxisAssignment& a, const AxisAssignment& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch");
  std::vector<int> axes;
  for (int i = 0; i < a.dimension(); ++i)
    if (a.momentum(i) != b.momentum(i)) axes.push_back(i);
  return axes;
}

std::optional<int> contiguity_index(const AxisAssignment& a, const AxisAssignment& b) {
  if (distance(a, b) != 1) return std::nullopt;
  return differing_axes(a, b).front();
}

}  // namespace mf
