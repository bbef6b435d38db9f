#pragma once

#include "prismknot/curve.hpp"
#include "prismknot/hexknot.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace prismknot {

// Based, signed chord diagram of a generic projection. Entries are sorted
// by curve parameter in [0,1) (the basepoint sits at parameter 0); each
// crossing id appears exactly twice, once over and once under, ids
// numbered by first appearance.
struct GaussEntry {
  double t;
  int id;
  bool over;
  int sign;
};

struct GaussDiagram {
  std::vector<GaussEntry> entries;
};

// Double points of the projection along `direction`, located by segment
// scanning at `samples` resolution and Newton refinement. nullopt when
// the projection is non-generic (near-tangential crossing, near-triple
// point, or vanishing depth separation at relative tolerance 1e-7).
std::optional<GaussDiagram> gauss_diagram(const Curve3& c, const Vec3& direction,
                                          int samples = 1 << 12);

// Quadratic Conway coefficient from the based diagram (Polyak-Viro
// pairing count; basepoint- and direction-independent).
int a2(const GaussDiagram& d);

// a2 over five generic directions, which must agree.
// Throws std::runtime_error when directions disagree or none are generic.
int a2_of_curve(const Curve3& c, std::uint64_t seed = 0x5eedULL);
int a2_of_curve(const KnotCurve& c, std::uint64_t seed = 0x5eedULL);

// Canonical one-line form, e.g. "O1+ U2+ O3+ U1+ O2+ U3+".
std::string canonical_line(const GaussDiagram& d);

// Combinatorial diagram for bracket/oracle computations.
KnotDiagram to_knot_diagram(const GaussDiagram& d);

}  // namespace prismknot
