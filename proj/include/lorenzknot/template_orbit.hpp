#pragma once

#include <array>
#include <string>

#include "lorenzknot/curve.hpp"
#include "lorenzknot/invariants.hpp"

namespace lorenzknot {

/// Cyclic word over {L, R}; the symbolic itinerary of a periodic orbit on
/// the Lorenz template.
class TemplateWord {
  public:
    explicit TemplateWord(std::string letters);
    const std::string& letters() const { return letters_; }
    int length() const { return static_cast<int>(letters_.size()); }
    TemplateWord rotated(int k) const;
    /// A word is primitive when it is not a proper power of a shorter word.
    bool primitive() const;
    bool mixed() const;  // contains both letters

  private:
    std::string letters_;
};

/// 2x2 integer matrix with determinant one.
struct IntegerMatrix2 {
    std::array<std::array<long long, 2>, 2> a{{{1, 0}, {0, 1}}};
    long long trace() const { return a[0][0] + a[1][1]; }
    long long det() const { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }
};

/// Product of the generator matrices L = [[1,1],[0,1]], R = [[1,0],[1,1]]
/// in word order.
IntegerMatrix2 word_to_matrix(const TemplateWord& w);

/// Branch-line positions of the orbit in lexicographic itinerary order,
/// one rank per rotation of the word (0-based).
std::vector<int> branch_line_ranks(const TemplateWord& w);

/// The periodic orbit of the word embedded on a piecewise-linear model of
/// the template: strands ordered on the branch line by itinerary, the
/// left-ear strands passing in front where the two bands merge, closed by
/// nested return arcs. Requires a primitive word.
ClosedCurve template_orbit(const TemplateWord& w);

/// template_orbit -> project -> simplify -> alexander -> classify.
/// Requires a primitive word of length <= 16.
KnotName orbit_knot_type(const TemplateWord& w);

}  // namespace lorenzknot
