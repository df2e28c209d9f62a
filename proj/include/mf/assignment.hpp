#ifndef MF_ASSIGNMENT_HPP
#define MF_ASSIGNMENT_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mf {

/// Position/momentum choice for each of N axes: one vertex of the N-cube.
///
/// Axes are 0-based in the API and 1-based in type-strings ("12'3").
/// The assignment is stored as an N-bit integer with momentum = 1 and axis 0
/// in the most significant bit, so integer order is the canonical vertex
/// order (lexicographic over axes, position before momentum).
class AxisAssignment {
 public:
  static constexpr int kMaxDimension = 63;

  AxisAssignment() = default;
  AxisAssignment(int dimension, std::uint64_t code);

  static AxisAssignment all_position(int dimension) { return {dimension, 0}; }
  static AxisAssignment from_flags(const std::vector<bool>& momentum);

  int dimension() const { return dimension_; }
  std::uint64_t code() const { return code_; }

  bool momentum(int axis) const { return (code_ >> shift(axis)) & 1u; }
  bool position(int axis) const { return !momentum(axis); }
  AxisAssignment flipped(int axis) const;

  // "12'3" shorthand; axes above 9 are bracketed, e.g. "[10]'".
  std::string type_string() const;
  // Canonical JSON form: one 'q' or 'p' per axis.
  std::string qp_string() const;

  friend bool operator==(const AxisAssignment&, const AxisAssignment&) = default;
  friend auto operator<=>(const AxisAssignment& a, const AxisAssignment& b) {
    if (auto c = a.dimension_ <=> b.dimension_; c != 0) return c;
    return a.code_ <=> b.code_;
  }

 private:
  int shift(int axis) const { return dimension_ - 1 - axis; }

  int dimension_ = 0;
  std::uint64_t code_ = 0;
};

/// Parses the primed shorthand: each axis index 1..N exactly once,
/// optionally followed by an apostrophe (momentum).
AxisAssignment parse_type(std::string_view text, int dimension);

/// Parses the 'q'/'p' string form.
AxisAssignment parse_qp(std::string_view text);

/// Number of axes on which the two assignments differ.
int distance(const AxisAssignment& a, const AxisAssignment& b);

/// Axes (ascending) on which the two assignments differ.
std::vector<int> differing_axes(const AxisAssignment& a, const AxisAssignment& b);

/// The unique differing axis when a and b are contiguous (distance 1).
std::optional<int> contiguity_index(const AxisAssignment& a, const AxisAssignment& b);

}  // namespace mf

#endif  // MF_ASSIGNMENT_HPP
