#pragma once

#include <string>

#include "lorenzknot/diagram.hpp"
#include "lorenzknot/laurent.hpp"

namespace lorenzknot {

/// Alexander polynomial from the Wirtinger presentation: one relation per
/// crossing, Fox derivatives abelianized to Z[t,1/t], any maximal minor's
/// determinant by fraction-free elimination, then the symmetric normal
/// form with positive leading coefficient. Unknot gives 1.
Laurent alexander_polynomial(const KnotDiagram& d);

/// Kauffman bracket state sum with writhe correction, reduced so the
/// unknot maps to 1. The variable is q = t^(1/4); for knots every exponent
/// is a multiple of 4 (an honest polynomial in t). Throws
/// TooManyCrossingsError above max_crossings.
Laurent kauffman_bracket_jones(const KnotDiagram& d, int max_crossings = 24);

struct KnotName {
    enum Kind { unknot, twist, unknown } kind{unknown};
    int half_twists{0};     // twist knots: 1 = 3_1, 2 = 4_1, 3 = 5_2, ...
    std::string text;       // "unknot", "3_1", "4_1", "5_2", "twist(4)", "unknown(...)"
};

/// Canonical twist-knot diagram built combinatorially: n half-twists in a
/// band closed by a two-crossing clasp (n+2 crossings before reduction).
KnotDiagram twist_knot_diagram(int half_twists);

/// Matches a normalized Alexander polynomial against the generated
/// twist-knot table (entries computed at startup by running
/// alexander_polynomial on twist_knot_diagram(n)); unmatched polynomials
/// come back as unknown with the polynomial printed.
KnotName classify(const Laurent& alexander, int max_half_twists = 8);

}  // namespace lorenzknot
