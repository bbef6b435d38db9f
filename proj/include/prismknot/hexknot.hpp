#pragma once

#include "prismknot/geom.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace prismknot {

// Laurent polynomial in one variable with integer coefficients.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  static LaurentPoly monomial(long long coeff, int exponent);

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  bool operator==(const LaurentPoly& o) const;
  // A -> A^{-1}
  LaurentPoly mirrored() const;
  bool is_zero() const { return coeff_.empty(); }
  long long coeff(int exponent) const;
  std::string to_string() const;

 private:
  void trim();
  int lo_ = 0;
  std::vector<long long> coeff_;  // coeff_[i] multiplies A^(lo_ + i)
};

// A knot diagram as crossing passages in order along the strand: passage
// 2i and 2i+1 belong to positions along the circle; each crossing is met
// once over and once under. This is the combinatorial layer under both
// the hexagon classifier and the Gauss-diagram code.
struct DiagramCrossing {
  int over_pos;   // passage index of the over strand, 0..2n-1
  int under_pos;  // passage index of the under strand
  int sign;       // writhe sign, +1 or -1
};

struct KnotDiagram {
  int passages = 0;  // 2 * number of crossings
  std::vector<DiagramCrossing> crossings;
};

// Kauffman bracket by the 2^n state sum (n <= 9 here), and the
// writhe-normalized invariant f = (-A^3)^{-w} * bracket.
LaurentPoly kauffman_bracket(const KnotDiagram& d);
LaurentPoly kauffman_f(const KnotDiagram& d);

// Reference values of f: unknot, and the two trefoils keyed by the sign
// of their standard alternating 3-crossing diagrams.
const LaurentPoly& f_unknot();
const LaurentPoly& f_trefoil_right();  // all-positive diagram
const LaurentPoly& f_trefoil_left();

// ---------------------------------------------------------------------------

struct Hexagon {
  std::array<Vec3, 6> v;  // cyclic order
};

struct Crossing {
  int seg_over;    // segment index 0..5 (segment i joins vertex i to i+1)
  int seg_under;
  double u_over;   // parameter along each segment, strictly in (0,1)
  double u_under;
  int sign;
};

struct CrossingList {
  std::vector<Crossing> crossings;
  double margin = 1.0;  // smallest relative determinant/separation seen
};

// Orthogonal projection along `direction`; nullopt when some crossing
// determinant, endpoint coincidence or depth separation falls below the
// relative tolerance 1e-9.
std::optional<CrossingList> project_hexagon(const Hexagon& hex, const Vec3& direction);

enum class HexKind { Unknot, TrefoilLeft, TrefoilRight, Degenerate };

std::string to_string(HexKind k);

struct HexClass {
  HexKind kind = HexKind::Degenerate;
  double margin = 0.0;
};

// Classification over 32 quasi-random directions; Degenerate when no
// direction is generic. The margin witnesses openness of the answer.
HexClass classify_hexagon(const Hexagon& hex);

// Stereographic-trefoil test for an ordered co-spherical 6-tuple on S^3.
struct StereoResult {
  enum Kind { Yes, Coplanar, No } kind = No;
  HexClass cls;  // valid when kind == Yes
};

// Throws std::invalid_argument if the points are not co-spherical
// (homogenized rank > 4 at tolerance 1e-8).
StereoResult is_stereographic_trefoil(const std::array<Vec4, 6>& points);

}  // namespace prismknot
