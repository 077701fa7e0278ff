#include "lorenzknot/invariants.hpp"

#include <map>
#include <mutex>
#include <numeric>

#include "lorenzknot/project.hpp"

namespace lorenzknot {

namespace {

// Fraction-free (Bareiss) determinant over Z[t]; entries must be plain
// polynomials (nonnegative exponents).
Laurent bareiss_determinant(std::vector<std::vector<Laurent>> m) {
    const size_t k = m.size();
    if (k == 0) return Laurent(1);
    Laurent prev(1);
    int sign = 1;
    for (size_t r = 0; r + 1 < k; ++r) {
        if (m[r][r].is_zero()) {
            size_t swap_row = r + 1;
            while (swap_row < k && m[swap_row][r].is_zero()) ++swap_row;
            if (swap_row == k) return Laurent();  // singular
            std::swap(m[r], m[swap_row]);
            sign = -sign;
        }
        for (size_t i = r + 1; i < k; ++i) {
            for (size_t j = r + 1; j < k; ++j) {
                m[i][j] = (m[i][j] * m[r][r] - m[i][r] * m[r][j]).div_exact(prev);
            }
            m[i][r] = Laurent();
        }
        prev = m[r][r];
    }
    return sign > 0 ? m[k - 1][k - 1] : -m[k - 1][k - 1];
}

}  // namespace

Laurent alexander_polynomial(const KnotDiagram& d) {
    const int n = d.crossings();
    if (n == 0) return Laurent(1);
    d.validate();

    // Wirtinger arc of each pass along the strand walk: arcs advance after
    // every under-pass.
    const auto order = d.strand_order();
    std::vector<int> under_arc_in(static_cast<size_t>(n), -1);
    std::vector<int> over_arc(static_cast<size_t>(n), -1);
    int arc = 0;
    std::vector<int> pass_arc(order.size());
    for (size_t k = 0; k < order.size(); ++k) {
        pass_arc[k] = arc % n;
        if (KnotDiagram::slot_of(order[k]) == 0) ++arc;
    }
    for (size_t k = 0; k < order.size(); ++k) {
        const int c = KnotDiagram::crossing_of(order[k]);
        if (KnotDiagram::slot_of(order[k]) == 0) under_arc_in[static_cast<size_t>(c)] = pass_arc[k];
        else over_arc[static_cast<size_t>(c)] = pass_arc[k];
    }

    // One relation per crossing; generators are the n arcs. Fox derivatives
    // abelianized: positive x_c = x_o x_a x_o^-1 gives (1-t, t, -1) on
    // columns (o, a, c); negative rows are scaled by the unit t.
    const Laurent one(1), t(1, 1);
    std::vector<std::vector<Laurent>> m(static_cast<size_t>(n),
                                        std::vector<Laurent>(static_cast<size_t>(n)));
    for (int c = 0; c < n; ++c) {
        const int o = over_arc[static_cast<size_t>(c)];
        const int a = under_arc_in[static_cast<size_t>(c)];
        const int out = (a + 1) % n;
        auto& row = m[static_cast<size_t>(c)];
        if (d.sign(c) > 0) {
            row[static_cast<size_t>(o)] = row[static_cast<size_t>(o)] + (one - t);
            row[static_cast<size_t>(a)] = row[static_cast<size_t>(a)] + t;
            row[static_cast<size_t>(out)] = row[static_cast<size_t>(out)] - one;
        } else {
            row[static_cast<size_t>(o)] = row[static_cast<size_t>(o)] + (t - one);
            row[static_cast<size_t>(a)] = row[static_cast<size_t>(a)] + one;
            row[static_cast<size_t>(out)] = row[static_cast<size_t>(out)] - t;
        }
    }

    // Any maximal minor: drop the last row and column.
    std::vector<std::vector<Laurent>> minor;
    for (int i = 0; i + 1 < n; ++i)
        minor.emplace_back(m[static_cast<size_t>(i)].begin(),
                           m[static_cast<size_t>(i)].end() - 1);
    Laurent det = bareiss_determinant(std::move(minor));
    if (det.is_zero())
        throw std::logic_error("alexander: vanishing determinant (not a knot diagram?)");
    return alexander_normal_form(det);
}

Laurent kauffman_bracket_jones(const KnotDiagram& d, int max_crossings) {
    const int n = d.crossings();
    if (n > max_crossings)
        throw TooManyCrossingsError("jones: diagram exceeds the state-sum crossing cap");
    if (n == 0) return Laurent(1);
    d.validate();

    // Bracket state sum in A. Smoothing A joins slots (0,1) and (2,3);
    // smoothing B joins (1,2) and (3,0).
    Laurent bracket;
    const Laurent delta = -Laurent(1, 2) - Laurent(1, -2);
    std::vector<int> dsu(static_cast<size_t>(4 * n));
    const auto find = [&dsu](int x) {
        while (dsu[static_cast<size_t>(x)] != x) {
            dsu[static_cast<size_t>(x)] = dsu[static_cast<size_t>(dsu[static_cast<size_t>(x)])];
            x = dsu[static_cast<size_t>(x)];
        }
        return x;
    };
    const auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) dsu[static_cast<size_t>(a)] = b;
    };
    for (uint64_t state = 0; state < (1ull << n); ++state) {
        std::iota(dsu.begin(), dsu.end(), 0);
        int a_count = 0;
        for (int c = 0; c < n; ++c) {
            const bool smooth_a = (state >> c) & 1;
            a_count += smooth_a ? 1 : -1;
            if (smooth_a) {
                unite(KnotDiagram::dart(c, 0), KnotDiagram::dart(c, 1));
                unite(KnotDiagram::dart(c, 2), KnotDiagram::dart(c, 3));
            } else {
                unite(KnotDiagram::dart(c, 1), KnotDiagram::dart(c, 2));
                unite(KnotDiagram::dart(c, 3), KnotDiagram::dart(c, 0));
            }
        }
        for (int dart = 0; dart < 4 * n; ++dart) unite(dart, d.mate[static_cast<size_t>(dart)]);
        int loops = 0;
        for (int dart = 0; dart < 4 * n; ++dart) loops += find(dart) == dart;
        Laurent term(1, a_count);
        for (int l = 1; l < loops; ++l) term = term * delta;
        bracket = bracket + term;
    }
    // Writhe correction f = (-A^3)^{-w} <D>, then A = q^{-1} with q = t^(1/4).
    const int w = d.writhe();
    Laurent f = bracket.shifted(-3 * w);
    if (w % 2 != 0) f = -f;
    return f.inverted();
}

namespace {

// Plat closure of a four-string braid, built as a 3-D polyline. Each braid
// letter swaps two adjacent columns, the front strand at depth +h; caps join
// column pairs (0,1) and (2,3) above and below. Throws if the closure is not
// a single component.
ClosedCurve plat_closure(const std::vector<std::pair<int, int>>& word) {
    const double h = 0.5;
    const int rows = static_cast<int>(word.size());
    std::array<std::vector<Vec3>, 4> strand;      // polylines indexed by start column
    std::array<int, 4> col{0, 1, 2, 3};           // strand -> current column
    for (int s = 0; s < 4; ++s) strand[static_cast<size_t>(s)].emplace_back(s, 0.0, 0.0);
    for (int r = 0; r < rows; ++r) {
        const auto [j, sign] = word[static_cast<size_t>(r)];  // columns j-1, j
        const double y0 = -r, y1 = -(r + 1);
        for (int s = 0; s < 4; ++s) {
            auto& pl = strand[static_cast<size_t>(s)];
            const int c = col[static_cast<size_t>(s)];
            if (c == j - 1 || c == j) {
                const int to = c == j ? j - 1 : j;
                const bool front = (c == j - 1) == (sign > 0);
                pl.emplace_back(c, y0 - 0.25, front ? h : -h);
                pl.emplace_back(to, y1 + 0.25, front ? h : -h);
                pl.emplace_back(to, y1, 0.0);
                col[static_cast<size_t>(s)] = to;
            } else {
                pl.emplace_back(c, y1, 0.0);
            }
        }
    }
    // Caps: top joins starting columns, bottom joins final columns; each cap
    // pairs column 2k with 2k+1.
    std::array<int, 4> strand_at_bottom{};  // column -> strand
    for (int s = 0; s < 4; ++s) strand_at_bottom[static_cast<size_t>(col[static_cast<size_t>(s)])] = s;
    const double yb = -rows;
    ClosedCurve curve;
    std::array<bool, 4> used{};
    int s = 0;
    bool descending = true;
    for (int leg = 0; leg < 4; ++leg) {
        used[static_cast<size_t>(s)] = true;
        const auto& pl = strand[static_cast<size_t>(s)];
        if (descending) {
            curve.points.insert(curve.points.end(), pl.begin(), pl.end());
            const int c = col[static_cast<size_t>(s)];
            const int partner_col = c ^ 1;
            curve.points.emplace_back(c, yb - 0.75, 0.0);
            curve.points.emplace_back(partner_col, yb - 0.75, 0.0);
            s = strand_at_bottom[static_cast<size_t>(partner_col)];
        } else {
            curve.points.insert(curve.points.end(), pl.rbegin(), pl.rend());
            const int c = s;  // top column = start column
            const int partner_col = c ^ 1;
            curve.points.emplace_back(c, 0.75, 0.0);
            curve.points.emplace_back(partner_col, 0.75, 0.0);
            s = partner_col;  // strand starting at that column
        }
        descending = !descending;
        if (leg < 3 && used[static_cast<size_t>(s)])
            throw std::logic_error("plat closure: more than one component");
    }
    // The walk must return to the start of strand 0 travelling downward.
    if (s != 0 || !descending)
        throw std::logic_error("plat closure: walk did not close up");
    // Remove the duplicated joint: last cap already lands at strand 0's top.
    return curve;
}

}  // namespace

KnotDiagram twist_knot_diagram(int half_twists) {
    if (half_twists < 1) throw DomainError("twist_knot_diagram: need at least one half twist");
    // n half-twists of the middle pair plus the two clasp crossings, as the
    // four-plat of the odd-length fraction n + 1/(1 + 1/1).
    std::vector<std::pair<int, int>> word;
    for (int k = 0; k < half_twists; ++k) word.emplace_back(2, +1);
    word.emplace_back(1, -1);
    word.emplace_back(2, +1);
    const ClosedCurve c = plat_closure(word);
    return project(c, Vec3(0.0131, 0.0267, 1.0).normalized());
}

KnotName classify(const Laurent& alexander, int max_half_twists) {
    KnotName name;
    if (alexander == Laurent(1)) {
        name.kind = KnotName::unknot;
        name.text = "unknot";
        return name;
    }
    static std::mutex table_mutex;
    static std::map<int, Laurent> table;
    {
        std::lock_guard<std::mutex> lock(table_mutex);
        for (int n = 1; n <= max_half_twists; ++n) {
            if (!table.count(n)) table[n] = alexander_polynomial(twist_knot_diagram(n));
        }
        for (int n = 1; n <= max_half_twists; ++n) {
            if (table.at(n) == alexander) {
                name.kind = KnotName::twist;
                name.half_twists = n;
                name.text = n == 1 ? "3_1" : n == 2 ? "4_1" : n == 3 ? "5_2"
                                           : "twist(" + std::to_string(n) + ")";
                return name;
            }
        }
    }
    name.kind = KnotName::unknown;
    name.text = "unknown(" + alexander.to_string() + ")";
    return name;
}

}  // namespace lorenzknot
