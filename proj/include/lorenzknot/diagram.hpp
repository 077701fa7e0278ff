#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lorenzknot/types.hpp"

namespace lorenzknot {

/// Planar knot diagram as a combinatorial map.
///
/// Each crossing owns four darts in counterclockwise planar order,
/// dart id = 4*crossing + slot. Slot semantics are canonical:
///   slot 0 = incoming under-strand, slot 2 = outgoing under-strand,
///   the over-strand enters at over_in (1 or 3) and leaves opposite.
/// mate[] pairs each outgoing dart with the incoming dart it flows to.
/// Crossing sign is +1 exactly when over_in == 3 (right-hand rule:
/// over-direction cross under-direction positive).
///
/// The zero-crossing unknot is the empty map.
class KnotDiagram {
  public:
    std::vector<int> mate;         // size 4n
    std::vector<uint8_t> over_in;  // size n, each 1 or 3

    int crossings() const { return static_cast<int>(over_in.size()); }
    static int crossing_of(int dart) { return dart >> 2; }
    static int slot_of(int dart) { return dart & 3; }
    static int dart(int crossing, int slot) { return 4 * crossing + slot; }

    bool is_incoming(int d) const {
        const int s = slot_of(d);
        return s == 0 || s == over_in[static_cast<size_t>(crossing_of(d))];
    }
    int over_out_slot(int c) const { return 4 - over_in[static_cast<size_t>(c)]; }
    int sign(int c) const { return over_in[static_cast<size_t>(c)] == 3 ? +1 : -1; }
    int writhe() const;

    /// The dart where the strand leaves after entering at incoming dart d.
    int pass_exit(int d) const {
        const int c = crossing_of(d), s = slot_of(d);
        return s == 0 ? dart(c, 2) : dart(c, 4 - s);
    }

    /// Incoming darts in strand order from a canonical start; length 2n.
    std::vector<int> strand_order() const;

    /// Dart orbits of the face permutation d -> rot(mate[d]).
    std::vector<std::vector<int>> faces() const;

    /// Checks mate involution, in/out pairing, single component, and
    /// the planar face count; throws std::logic_error on violation.
    void validate() const;

    /// Over/under flipped at every crossing (mirror image through the
    /// projection plane); rotations preserved.
    KnotDiagram mirrored() const;

    bool operator==(const KnotDiagram& o) const {
        return mate == o.mate && over_in == o.over_in;
    }
};

/// PD text: one `X a,b,c,d` line per crossing (edge labels 1..2n,
/// counterclockwise from the incoming under-edge), preceded by a
/// `# arcs=N orientation=ccw` header.
std::string pd_code(const KnotDiagram& d);
KnotDiagram parse_pd_code(const std::string& text);

// Local moves. Removal surgeries require the named configuration and throw
// std::logic_error otherwise; insertion surgeries are always applicable.

struct MonogonSite { int loop_dart; };
struct BigonSite { int dart_a, dart_b; };      // the two face darts
struct TriangleSite { int d0, d1, d2; };       // face darts, validated order

std::vector<MonogonSite> find_monogons(const KnotDiagram& d);
std::vector<BigonSite> find_removable_bigons(const KnotDiagram& d);
std::vector<TriangleSite> find_r3_triangles(const KnotDiagram& d);

KnotDiagram r1_remove(const KnotDiagram& d, const MonogonSite& site);
KnotDiagram r2_remove(const KnotDiagram& d, const BigonSite& site);
KnotDiagram r3_slide(const KnotDiagram& d, const TriangleSite& site);

/// Adds a kink on the edge leaving out-dart `out`; variant in [0,4) selects
/// kink chirality and which pass comes first.
KnotDiagram r1_insert(const KnotDiagram& d, int out_dart, int variant);

/// Pokes the strand of the edge containing face-dart `u` across the edge
/// containing face-dart `w` (both on the same face, different edges);
/// poked strand passes over both new crossings when `poke_over`.
KnotDiagram r2_insert(const KnotDiagram& d, int u, int w, bool poke_over);

/// Greedy crossing reduction: monogons and removable bigons first, single
/// R3 slides accepted only when they unlock a reduction.
KnotDiagram reidemeister_simplify(const KnotDiagram& d);

/// One random Reidemeister move (insert or remove, R1/R2/R3) drawn from the
/// applicable candidates; used by the invariance property suites.
KnotDiagram random_reidemeister_move(const KnotDiagram& d, std::mt19937_64& rng);

}  // namespace lorenzknot
