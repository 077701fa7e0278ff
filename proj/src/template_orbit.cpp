#include "lorenzknot/template_orbit.hpp"

#include <algorithm>

#include "lorenzknot/project.hpp"

namespace lorenzknot {

TemplateWord::TemplateWord(std::string letters) : letters_(std::move(letters)) {
    if (letters_.empty()) throw DomainError("template word: must be nonempty");
    for (const char ch : letters_)
        if (ch != 'L' && ch != 'R')
            throw DomainError("template word: alphabet is {L, R}");
}

TemplateWord TemplateWord::rotated(int k) const {
    const int n = length();
    k = ((k % n) + n) % n;
    return TemplateWord(letters_.substr(static_cast<size_t>(k)) +
                        letters_.substr(0, static_cast<size_t>(k)));
}

bool TemplateWord::primitive() const {
    // w is a proper power exactly when w occurs strictly inside w+w.
    const std::string doubled = letters_ + letters_;
    return doubled.find(letters_, 1) == letters_.size();
}

bool TemplateWord::mixed() const {
    return letters_.find('L') != std::string::npos &&
           letters_.find('R') != std::string::npos;
}

IntegerMatrix2 word_to_matrix(const TemplateWord& w) {
    IntegerMatrix2 m;
    for (const char ch : w.letters()) {
        IntegerMatrix2 g;
        if (ch == 'L') g.a = {{{1, 1}, {0, 1}}};
        else g.a = {{{1, 0}, {1, 1}}};
        IntegerMatrix2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.a[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    m.a[static_cast<size_t>(i)][0] * g.a[0][static_cast<size_t>(j)] +
                    m.a[static_cast<size_t>(i)][1] * g.a[1][static_cast<size_t>(j)];
        m = r;
    }
    return m;
}

std::vector<int> branch_line_ranks(const TemplateWord& w) {
    const int n = w.length();
    std::vector<std::string> rots(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) rots[static_cast<size_t>(k)] = w.rotated(k).letters();
    std::vector<int> idx(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) idx[static_cast<size_t>(k)] = k;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return rots[static_cast<size_t>(a)] < rots[static_cast<size_t>(b)];
    });
    std::vector<int> rank(static_cast<size_t>(n));
    for (int pos = 0; pos < n; ++pos)
        rank[static_cast<size_t>(idx[static_cast<size_t>(pos)])] = pos;
    return rank;
}

ClosedCurve template_orbit(const TemplateWord& w) {
    if (!w.primitive())
        throw DomainError("template orbit: word is a proper power (multiple cover)");
    const int n = w.length();
    const auto rank = branch_line_ranks(w);

    // Branch-line copies at y=1 (departure) and y=0 (landing); the strand
    // of rotation k drops from rank[k] to rank[k+1]. Within each ear the
    // shift is order-preserving, so same-letter strands never cross; where
    // the ears overlap, L-strands pass in front. Return arcs are nested
    // rectangles around the left, adding no crossings.
    const double depth = 0.6;
    ClosedCurve c;
    for (int k = 0; k < n; ++k) {
        const double x0 = 1.0 + rank[static_cast<size_t>(k)];
        const double x1 = 1.0 + rank[static_cast<size_t>((k + 1) % n)];
        const double z = w.letters()[static_cast<size_t>(k)] == 'L' ? depth : -depth;
        c.points.emplace_back(x0, 1.0, 0.0);
        c.points.emplace_back(x0, 0.85, z);
        c.points.emplace_back(x1, 0.15, z);
        c.points.emplace_back(x1, 0.0, 0.0);
        const double pad = 0.25 + 0.1 * x1;
        c.points.emplace_back(x1, -pad, 0.0);
        c.points.emplace_back(-pad, -pad, 0.0);
        c.points.emplace_back(-pad, 1.0 + pad, 0.0);
        c.points.emplace_back(x1, 1.0 + pad, 0.0);
    }
    return c;
}

KnotName orbit_knot_type(const TemplateWord& w) {
    if (w.length() > 16)
        throw DomainError("orbit_knot_type: words are capped at length 16");
    const ClosedCurve c = template_orbit(w);
    const KnotDiagram d = project_generic(c, 0x10a3d5u, 20);
    const KnotDiagram s = reidemeister_simplify(d);
    return classify(alexander_polynomial(s));
}

}  // namespace lorenzknot
