#include "lorenzknot/diagram.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lorenzknot {

namespace {

int rot(int d) { return (d & ~3) | ((d + 1) & 3); }

struct StrandPass {
    int c1, c2;       // crossings in strand order (before a slide)
    int out1, in2;    // triangle-edge darts: exits c1 at out1, enters c2 at in2
    int sin1, sout2;  // entry dart at c1, exit dart at c2
};

bool is_over_slot(int dart) {
    const int s = KnotDiagram::slot_of(dart);
    return s == 1 || s == 3;
}

// Entry dart of the pass that exits at dart e.
int pass_entry(int e) {
    const int c = KnotDiagram::crossing_of(e), s = KnotDiagram::slot_of(e);
    return s == 2 ? KnotDiagram::dart(c, 0) : KnotDiagram::dart(c, 4 - s);
}

// Deletes the flagged crossings, reconnecting strands through them.
KnotDiagram remove_crossings(const KnotDiagram& d, const std::vector<bool>& dying) {
    const int n = d.crossings();
    std::vector<int> new_id(static_cast<size_t>(n), -1);
    int m = 0;
    for (int c = 0; c < n; ++c)
        if (!dying[static_cast<size_t>(c)]) new_id[static_cast<size_t>(c)] = m++;
    KnotDiagram r;
    r.over_in.resize(static_cast<size_t>(m));
    r.mate.assign(static_cast<size_t>(4 * m), -1);
    for (int c = 0; c < n; ++c) {
        if (dying[static_cast<size_t>(c)]) continue;
        r.over_in[static_cast<size_t>(new_id[static_cast<size_t>(c)])] =
            d.over_in[static_cast<size_t>(c)];
    }
    const auto remap = [&](int dart) {
        return KnotDiagram::dart(new_id[static_cast<size_t>(KnotDiagram::crossing_of(dart))],
                                 KnotDiagram::slot_of(dart));
    };
    for (int dart = 0; dart < 4 * n; ++dart) {
        if (dying[static_cast<size_t>(KnotDiagram::crossing_of(dart))]) continue;
        if (d.is_incoming(dart)) continue;
        // Walk forward through dying crossings to the surviving landing dart.
        int q = d.mate[static_cast<size_t>(dart)];
        while (dying[static_cast<size_t>(KnotDiagram::crossing_of(q))])
            q = d.mate[static_cast<size_t>(d.pass_exit(q))];
        r.mate[static_cast<size_t>(remap(dart))] = remap(q);
        r.mate[static_cast<size_t>(remap(q))] = remap(dart);
    }
    return r;
}

}  // namespace

int KnotDiagram::writhe() const {
    int w = 0;
    for (int c = 0; c < crossings(); ++c) w += sign(c);
    return w;
}

std::vector<int> KnotDiagram::strand_order() const {
    std::vector<int> order;
    if (crossings() == 0) return order;
    const int start = 0;  // incoming under dart of crossing 0
    int d = start;
    do {
        order.push_back(d);
        d = mate[static_cast<size_t>(pass_exit(d))];
    } while (d != start && order.size() <= mate.size());
    return order;
}

std::vector<std::vector<int>> KnotDiagram::faces() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(mate.size(), false);
    for (size_t d0 = 0; d0 < mate.size(); ++d0) {
        if (seen[d0]) continue;
        std::vector<int> face;
        int d = static_cast<int>(d0);
        do {
            face.push_back(d);
            seen[static_cast<size_t>(d)] = true;
            d = rot(mate[static_cast<size_t>(d)]);
        } while (d != static_cast<int>(d0) && face.size() <= mate.size());
        out.push_back(std::move(face));
    }
    return out;
}

void KnotDiagram::validate() const {
    const int n = crossings();
    if (mate.size() != static_cast<size_t>(4 * n))
        throw std::logic_error("diagram: mate size mismatch");
    for (int c = 0; c < n; ++c) {
        if (over_in[static_cast<size_t>(c)] != 1 && over_in[static_cast<size_t>(c)] != 3)
            throw std::logic_error("diagram: over_in must be 1 or 3");
    }
    for (int d = 0; d < 4 * n; ++d) {
        const int m = mate[static_cast<size_t>(d)];
        if (m < 0 || m >= 4 * n || m == d || mate[static_cast<size_t>(m)] != d)
            throw std::logic_error("diagram: mate is not an involution");
        if (is_incoming(d) == is_incoming(m))
            throw std::logic_error("diagram: edge does not pair out with in");
    }
    if (n > 0 && strand_order().size() != static_cast<size_t>(2 * n))
        throw std::logic_error("diagram: not a single closed component");
    if (n > 0 && static_cast<int>(faces().size()) != n + 2)
        throw std::logic_error("diagram: face count violates planarity");
}

KnotDiagram KnotDiagram::mirrored() const {
    const int n = crossings();
    KnotDiagram r;
    r.over_in.resize(static_cast<size_t>(n));
    r.mate.assign(static_cast<size_t>(4 * n), -1);
    std::vector<int> remap(static_cast<size_t>(4 * n));
    for (int c = 0; c < n; ++c) {
        const int o = over_in[static_cast<size_t>(c)];
        r.over_in[static_cast<size_t>(c)] = static_cast<uint8_t>((4 - o) & 3);  // 1 <-> 3
        for (int s = 0; s < 4; ++s)
            remap[static_cast<size_t>(dart(c, s))] = dart(c, (s - o) & 3);
    }
    for (int d = 0; d < 4 * n; ++d)
        r.mate[static_cast<size_t>(remap[static_cast<size_t>(d)])] =
            remap[static_cast<size_t>(mate[static_cast<size_t>(d)])];
    return r;
}

std::string pd_code(const KnotDiagram& d) {
    const int n = d.crossings();
    std::ostringstream os;
    os << "# arcs=" << 2 * n << " orientation=ccw\n";
    if (n == 0) return os.str();
    const auto order = d.strand_order();
    std::vector<int> label(static_cast<size_t>(4 * n), 0);
    for (size_t k = 0; k < order.size(); ++k) {
        const int out = d.pass_exit(order[k]);
        const int in = order[(k + 1) % order.size()];
        label[static_cast<size_t>(out)] = static_cast<int>(k) + 1;
        label[static_cast<size_t>(in)] = static_cast<int>(k) + 1;
    }
    for (int c = 0; c < n; ++c) {
        os << "X " << label[static_cast<size_t>(KnotDiagram::dart(c, 0))];
        for (int s = 1; s < 4; ++s)
            os << "," << label[static_cast<size_t>(KnotDiagram::dart(c, s))];
        os << "\n";
    }
    return os.str();
}

KnotDiagram parse_pd_code(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<std::array<int, 4>> rows;
    while (std::getline(is, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        if (line[first] != 'X') throw std::logic_error("pd: expected X line");
        std::array<int, 4> r{};
        char x, comma;
        std::istringstream ls(line);
        ls >> x >> r[0] >> comma >> r[1] >> comma >> r[2] >> comma >> r[3];
        if (!ls) throw std::logic_error("pd: malformed X line");
        rows.push_back(r);
    }
    const int n = static_cast<int>(rows.size());
    KnotDiagram d;
    d.over_in.resize(static_cast<size_t>(n));
    d.mate.assign(static_cast<size_t>(4 * n), -1);
    if (n == 0) return d;
    const int edges = 2 * n;
    const auto succ = [&](int a) { return a % edges + 1; };
    std::vector<int> out_dart(static_cast<size_t>(edges) + 1, -1),
        in_dart(static_cast<size_t>(edges) + 1, -1);
    for (const auto& r : rows)
        for (const int label : r)
            if (label < 1 || label > edges)
                throw std::logic_error("pd: edge label out of range");
    for (int c = 0; c < n; ++c) {
        const auto& r = rows[static_cast<size_t>(c)];
        int oi;  // over-strand direction from the edge successor rule
        if (r[3] == succ(r[1])) oi = 1;
        else if (r[1] == succ(r[3])) oi = 3;
        else throw std::logic_error("pd: over-strand labels are not consecutive");
        d.over_in[static_cast<size_t>(c)] = static_cast<uint8_t>(oi);
        const int in_slots[2] = {0, oi}, out_slots[2] = {2, 4 - oi};
        for (int k = 0; k < 2; ++k) {
            in_dart[static_cast<size_t>(r[in_slots[k]])] = KnotDiagram::dart(c, in_slots[k]);
            out_dart[static_cast<size_t>(r[out_slots[k]])] = KnotDiagram::dart(c, out_slots[k]);
        }
    }
    for (int e = 1; e <= edges; ++e) {
        if (in_dart[static_cast<size_t>(e)] < 0 || out_dart[static_cast<size_t>(e)] < 0)
            throw std::logic_error("pd: edge label does not appear as both ends");
        d.mate[static_cast<size_t>(in_dart[static_cast<size_t>(e)])] =
            out_dart[static_cast<size_t>(e)];
        d.mate[static_cast<size_t>(out_dart[static_cast<size_t>(e)])] =
            in_dart[static_cast<size_t>(e)];
    }
    d.validate();
    return d;
}

std::vector<MonogonSite> find_monogons(const KnotDiagram& d) {
    std::vector<MonogonSite> out;
    for (int dart = 0; dart < static_cast<int>(d.mate.size()); ++dart) {
        if (rot(d.mate[static_cast<size_t>(dart)]) == dart) out.push_back({dart});
    }
    return out;
}

std::vector<BigonSite> find_removable_bigons(const KnotDiagram& d) {
    std::vector<BigonSite> out;
    for (int da = 0; da < static_cast<int>(d.mate.size()); ++da) {
        const int db = rot(d.mate[static_cast<size_t>(da)]);
        if (db == da) continue;
        if (rot(d.mate[static_cast<size_t>(db)]) != da) continue;
        if (da > db) continue;  // report each bigon once
        const int ma = d.mate[static_cast<size_t>(da)], mb = d.mate[static_cast<size_t>(db)];
        if (KnotDiagram::crossing_of(da) == KnotDiagram::crossing_of(ma)) continue;
        const bool a_over = is_over_slot(da) && is_over_slot(ma);
        const bool a_under = !is_over_slot(da) && !is_over_slot(ma);
        const bool b_over = is_over_slot(db) && is_over_slot(mb);
        const bool b_under = !is_over_slot(db) && !is_over_slot(mb);
        if ((a_over && b_under) || (a_under && b_over)) out.push_back({da, db});
    }
    return out;
}

std::vector<TriangleSite> find_r3_triangles(const KnotDiagram& d) {
    std::vector<TriangleSite> out;
    std::vector<bool> seen(d.mate.size(), false);
    for (int d0 = 0; d0 < static_cast<int>(d.mate.size()); ++d0) {
        if (seen[static_cast<size_t>(d0)]) continue;
        const int d1 = rot(d.mate[static_cast<size_t>(d0)]);
        const int d2 = rot(d.mate[static_cast<size_t>(d1)]);
        if (d1 == d0 || d2 == d0 || d2 == d1) continue;
        if (rot(d.mate[static_cast<size_t>(d2)]) != d0) continue;
        seen[static_cast<size_t>(d0)] = seen[static_cast<size_t>(d1)] =
            seen[static_cast<size_t>(d2)] = true;
        const int cs[3] = {KnotDiagram::crossing_of(d0), KnotDiagram::crossing_of(d1),
                           KnotDiagram::crossing_of(d2)};
        if (cs[0] == cs[1] || cs[1] == cs[2] || cs[0] == cs[2]) continue;
        // Slide needs a top strand (over at both corners it meets) and a
        // bottom strand (under at both); a cyclic over-pattern is immovable.
        int n_over = 0, n_under = 0;
        for (int dd : {d0, d1, d2}) {
            const int md = d.mate[static_cast<size_t>(dd)];
            if (is_over_slot(dd) && is_over_slot(md)) ++n_over;
            if (!is_over_slot(dd) && !is_over_slot(md)) ++n_under;
        }
        if (n_over == 1 && n_under == 1) out.push_back({d0, d1, d2});
    }
    return out;
}

KnotDiagram r1_remove(const KnotDiagram& d, const MonogonSite& site) {
    if (rot(d.mate[static_cast<size_t>(site.loop_dart)]) != site.loop_dart)
        throw std::logic_error("r1_remove: not a monogon");
    std::vector<bool> dying(static_cast<size_t>(d.crossings()), false);
    dying[static_cast<size_t>(KnotDiagram::crossing_of(site.loop_dart))] = true;
    KnotDiagram r = remove_crossings(d, dying);
    r.validate();
    return r;
}

KnotDiagram r2_remove(const KnotDiagram& d, const BigonSite& site) {
    bool listed = false;
    for (const auto& b : find_removable_bigons(d))
        listed |= (b.dart_a == site.dart_a && b.dart_b == site.dart_b) ||
                  (b.dart_a == site.dart_b && b.dart_b == site.dart_a);
    if (!listed) throw std::logic_error("r2_remove: not a removable bigon");
    std::vector<bool> dying(static_cast<size_t>(d.crossings()), false);
    dying[static_cast<size_t>(KnotDiagram::crossing_of(site.dart_a))] = true;
    dying[static_cast<size_t>(
        KnotDiagram::crossing_of(d.mate[static_cast<size_t>(site.dart_a)]))] = true;
    KnotDiagram r = remove_crossings(d, dying);
    r.validate();
    return r;
}

KnotDiagram r3_slide(const KnotDiagram& d, const TriangleSite& site) {
    StrandPass sp[3];
    for (int k = 0; k < 3; ++k) {
        const int td = (k == 0 ? site.d0 : k == 1 ? site.d1 : site.d2);
        const int md = d.mate[static_cast<size_t>(td)];
        const int out1 = d.is_incoming(td) ? md : td;
        const int in2 = d.is_incoming(td) ? td : md;
        sp[k].out1 = out1;
        sp[k].in2 = in2;
        sp[k].c1 = KnotDiagram::crossing_of(out1);
        sp[k].c2 = KnotDiagram::crossing_of(in2);
        sp[k].sin1 = pass_entry(out1);
        sp[k].sout2 = d.pass_exit(in2);
    }
    // Each strand now meets its two crossings in the opposite order; the
    // external edges re-land accordingly and the triangle re-forms on the
    // other side. Redirect edge endpoints, then rebuild the three inner
    // edges.
    std::map<int, int> redirect;
    for (const auto& s : sp) {
        redirect[s.sin1] = s.in2;
        redirect[s.sout2] = s.out1;
    }
    std::set<std::pair<int, int>> ext_edges;
    for (const auto& s : sp) {
        const int fin = d.mate[static_cast<size_t>(s.sin1)];
        const int fout = d.mate[static_cast<size_t>(s.sout2)];
        ext_edges.insert({std::min(fin, s.sin1), std::max(fin, s.sin1)});
        ext_edges.insert({std::min(s.sout2, fout), std::max(s.sout2, fout)});
    }
    KnotDiagram r = d;
    const auto relink = [&r](int a, int b) {
        r.mate[static_cast<size_t>(a)] = b;
        r.mate[static_cast<size_t>(b)] = a;
    };
    for (const auto& [a, b] : ext_edges) {
        const int ra = redirect.count(a) ? redirect[a] : a;
        const int rb = redirect.count(b) ? redirect[b] : b;
        relink(ra, rb);
    }
    for (const auto& s : sp) relink(s.sout2, s.sin1);
    r.validate();
    return r;
}

KnotDiagram r1_insert(const KnotDiagram& d, int out_dart, int variant) {
    if (d.crossings() == 0) throw std::logic_error("r1_insert: needs a crossing to anchor");
    if (d.is_incoming(out_dart)) throw std::logic_error("r1_insert: dart must be outgoing");
    const int i = d.mate[static_cast<size_t>(out_dart)];
    const int n = d.crossings();
    KnotDiagram r = d;
    r.mate.resize(static_cast<size_t>(4 * (n + 1)), -1);
    const auto relink = [&r](int a, int b) {
        r.mate[static_cast<size_t>(a)] = b;
        r.mate[static_cast<size_t>(b)] = a;
    };
    const int k = n;
    int enter, loop_a, loop_b, leave;
    uint8_t oi;
    switch (variant & 3) {
        case 0: oi = 3; enter = 0; loop_a = 2; loop_b = 3; leave = 1; break;
        case 1: oi = 1; enter = 0; loop_a = 2; loop_b = 1; leave = 3; break;
        case 2: oi = 3; enter = 3; loop_a = 1; loop_b = 0; leave = 2; break;
        default: oi = 1; enter = 1; loop_a = 3; loop_b = 0; leave = 2; break;
    }
    r.over_in.push_back(oi);
    relink(out_dart, KnotDiagram::dart(k, enter));
    relink(KnotDiagram::dart(k, loop_a), KnotDiagram::dart(k, loop_b));
    relink(KnotDiagram::dart(k, leave), i);
    r.validate();
    return r;
}

KnotDiagram r2_insert(const KnotDiagram& d, int u, int w, bool poke_over) {
    const int mu = d.mate[static_cast<size_t>(u)], mw = d.mate[static_cast<size_t>(w)];
    if (u == w || u == mw) throw std::logic_error("r2_insert: darts must be on distinct edges");
    const int oa = d.is_incoming(u) ? mu : u, ia = d.is_incoming(u) ? u : mu;
    const int ob = d.is_incoming(w) ? mw : w, ib = d.is_incoming(w) ? w : mw;
    const int n = d.crossings();

    // Which side of each edge the finger leaves from fixes the planar slot
    // layout and the order in which the poked-across strand meets the two
    // new crossings; exactly one of the four combinations is the genuine
    // poke (planar, with a removable bigon between the new crossings).
    struct Layout { int a_in, a_out, b_in, b_out; uint8_t oi; };
    for (int mir = 0; mir < 2; ++mir) {
        for (int b_meets_n1_first = 1; b_meets_n1_first >= 0; --b_meets_n1_first) {
            KnotDiagram r = d;
            r.mate.resize(static_cast<size_t>(4 * (n + 2)), -1);
            const auto relink = [&r](int a, int b) {
                r.mate[static_cast<size_t>(a)] = b;
                r.mate[static_cast<size_t>(b)] = a;
            };
            const int n1 = n, n2 = n + 1;
            Layout l1, l2;
            if (poke_over) { l1 = {3, 1, 0, 2, 3}; l2 = {1, 3, 0, 2, 1}; }
            else           { l1 = {0, 2, 1, 3, 1}; l2 = {0, 2, 3, 1, 3}; }
            if (mir) {
                const auto flip = [](Layout& l) {
                    const auto f = [](int s) { return s == 1 ? 3 : s == 3 ? 1 : s; };
                    l = {f(l.a_in), f(l.a_out), f(l.b_in), f(l.b_out),
                         static_cast<uint8_t>(4 - l.oi)};
                };
                flip(l1);
                flip(l2);
            }
            r.over_in.push_back(l1.oi);
            r.over_in.push_back(l2.oi);
            relink(oa, KnotDiagram::dart(n1, l1.a_in));
            relink(KnotDiagram::dart(n1, l1.a_out), KnotDiagram::dart(n2, l2.a_in));
            relink(KnotDiagram::dart(n2, l2.a_out), ia);
            const int bf = b_meets_n1_first ? n1 : n2, bs = b_meets_n1_first ? n2 : n1;
            const Layout& lf = b_meets_n1_first ? l1 : l2;
            const Layout& ls = b_meets_n1_first ? l2 : l1;
            relink(ob, KnotDiagram::dart(bf, lf.b_in));
            relink(KnotDiagram::dart(bf, lf.b_out), KnotDiagram::dart(bs, ls.b_in));
            relink(KnotDiagram::dart(bs, ls.b_out), ib);
            try {
                r.validate();
            } catch (const std::logic_error&) {
                continue;
            }
            bool genuine = false;
            for (const auto& b : find_removable_bigons(r)) {
                const int cx = KnotDiagram::crossing_of(b.dart_a);
                const int cy = KnotDiagram::crossing_of(r.mate[static_cast<size_t>(b.dart_a)]);
                genuine |= (cx == n1 && cy == n2) || (cx == n2 && cy == n1);
            }
            if (genuine) return r;
        }
    }
    throw std::logic_error("r2_insert: no planar poke (darts not on a common face?)");
}

KnotDiagram reidemeister_simplify(const KnotDiagram& d) {
    KnotDiagram cur = d;
    for (;;) {
        const auto monogons = find_monogons(cur);
        if (!monogons.empty()) {
            cur = r1_remove(cur, monogons.front());
            continue;
        }
        const auto bigons = find_removable_bigons(cur);
        if (!bigons.empty()) {
            cur = r2_remove(cur, bigons.front());
            continue;
        }
        bool progressed = false;
        for (const auto& tri : find_r3_triangles(cur)) {
            const KnotDiagram slid = r3_slide(cur, tri);
            if (!find_monogons(slid).empty() || !find_removable_bigons(slid).empty()) {
                cur = slid;
                progressed = true;
                break;
            }
        }
        if (!progressed) return cur;
    }
}

KnotDiagram random_reidemeister_move(const KnotDiagram& d, std::mt19937_64& rng) {
    const auto pick = [&rng](size_t n) { return static_cast<size_t>(rng() % n); };
    const auto monogons = find_monogons(d);
    const auto bigons = find_removable_bigons(d);
    const auto triangles = find_r3_triangles(d);
    std::vector<int> kinds;
    if (d.crossings() > 0) {
        kinds.push_back(0);
        kinds.push_back(1);
    }
    if (!monogons.empty()) kinds.push_back(2);
    if (!bigons.empty()) kinds.push_back(3);
    if (!triangles.empty()) kinds.push_back(4);
    if (kinds.empty()) throw std::logic_error("random move: no moves on the empty diagram");
    switch (kinds[pick(kinds.size())]) {
        case 0: {
            std::vector<int> outs;
            for (int dart = 0; dart < static_cast<int>(d.mate.size()); ++dart)
                if (!d.is_incoming(dart)) outs.push_back(dart);
            return r1_insert(d, outs[pick(outs.size())], static_cast<int>(rng() % 4));
        }
        case 1: {
            const auto faces = d.faces();
            for (int attempt = 0; attempt < 64; ++attempt) {
                const auto& f = faces[pick(faces.size())];
                if (f.size() < 2) continue;
                const int u = f[pick(f.size())];
                const int w = f[pick(f.size())];
                if (u == w || u == d.mate[static_cast<size_t>(w)]) continue;
                return r2_insert(d, u, w, rng() % 2 == 0);
            }
            // Dense small diagram: fall back to a kink.
            for (int dart = 0; dart < static_cast<int>(d.mate.size()); ++dart)
                if (!d.is_incoming(dart)) return r1_insert(d, dart, static_cast<int>(rng() % 4));
            throw std::logic_error("random move: no outgoing dart");
        }
        case 2: return r1_remove(d, monogons[pick(monogons.size())]);
        case 3: return r2_remove(d, bigons[pick(bigons.size())]);
        default: return r3_slide(d, triangles[pick(triangles.size())]);
    }
}

}  // namespace lorenzknot
