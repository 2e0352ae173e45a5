#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gpa/height.hpp"
#include "gpa/orbit.hpp"

namespace gpa {

struct LRAssignment {
    std::set<int> L, R;
};

enum class Config { Empty, BP, Sp, Sm, Wp, Wm, V3p, V3m, B, V0, V1p, V1m, V1pB, V1mB, V2p, V2m, V2pB2, V2mB2 };
enum class SideTag { None, L, R };

std::string config_name(Config c);
Config parse_config(const std::string& name);

struct JunctionType {
    Config config = Config::Empty;
    SideTag side = SideTag::None;
};

struct TrackDescription {
    std::vector<JunctionType> junctions;  // junctions[1..N]
};

enum class Side { L = 0, R = 1 };
enum class EdgeKind { bubble, loop, chord, bigon_side };
std::string kind_name(EdgeKind k);

struct SwitchRef {
    int junction = 0;
    Side side = Side::L;
};

struct InfEdge {
    int id = 0;
    int junction = 0;
    EdgeKind kind = EdgeKind::chord;
    SwitchRef ends[2];
    int depth = 0;
    bool encloses_puncture = false;
};

constexpr int kPuncture = -1;

// Junction contents as a chord diagram: the edge-ends at each switch listed
// bottom to top, each end named by its edge id. A loop's id appears twice on
// one side, a through chord once per side. kPuncture marks the face holding
// the puncture.
struct JunctionDiagram {
    std::vector<int> side[2];
    bool punctured = false;
};

struct TrainTrack {
    CriticalOrbit orbit;
    TrackDescription description;
    int depth = 0;
    std::vector<InfEdge> inf_edges;            // sorted by id; ids are sparse
    std::vector<JunctionDiagram> junctions;    // junctions[1..N]
    std::map<int, int> pi_map;                 // id -> image id
    std::vector<std::map<int, int>> b_rows;    // b_rows[1..N-1]: id -> count
    std::size_t edge_count_at(int d) const;    // edges with depth <= d
    const InfEdge& edge(int id) const;         // throws InternalError if absent
};

LRAssignment lr_assignment(const CriticalOrbit& orbit);
TrackDescription classify_junctions(const CriticalOrbit& orbit, const Rational& q, const KneadingClass& cls);
TrackDescription horseshoe_description();
// Dispatches to the horseshoe description at height zero.
TrackDescription describe_sequence(const CriticalOrbit& orbit, const KneadingClass& cls);
std::string describe(const TrackDescription& desc);
std::string describe(const TrainTrack& track);

TrainTrack grow_invariant_track(const CriticalOrbit& orbit, int depth);

struct ValidationReport {
    bool pass = true;
    int first_mismatch = 0;  // junction index, 0 if none
    std::vector<std::string> mismatches;
    std::vector<std::string> notes;
};

// Depth from which every feature of a configuration must be present.
int settle_depth(int N);
ValidationReport validate_track(const TrainTrack& track, const TrackDescription& desc, int depth);

// Face bookkeeping shared with the geometry layer.
struct JunctionShape {
    int through = 0;                  // L-R chords
    int loops[2] = {0, 0};            // loops per switch
    int bubbles = 0;                  // loops with no edge inside
    int enclosing = 0;                // loops whose inside holds the puncture
    int through_below_puncture = 0;   // through chords passing below the puncture
    int max_nesting = 0;
};
JunctionShape junction_shape(const TrainTrack& track, int junction);

}  // namespace gpa
