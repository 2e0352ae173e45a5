#include "gpa/traintrack.hpp"

#include <algorithm>
#include <sstream>

#include "gpa/errors.hpp"

namespace gpa {

namespace {

const char* const kConfigNames[] = {"\xE2\x88\x85", "BP", "S+", "S-", "W+", "W-", "V3+", "V3-", "B", "V0",
                                    "V1+", "V1-", "V1+B", "V1-B", "V2+", "V2-", "V2+B2", "V2-B2"};

}  // namespace

std::string config_name(Config c) { return kConfigNames[static_cast<int>(c)]; }

Config parse_config(const std::string& name) {
    for (int i = 0; i < static_cast<int>(std::size(kConfigNames)); ++i)
        if (name == kConfigNames[i]) return static_cast<Config>(i);
    throw DomainError("unknown configuration tag " + name);
}

std::string kind_name(EdgeKind k) {
    switch (k) {
        case EdgeKind::bubble: return "bubble";
        case EdgeKind::loop: return "loop";
        case EdgeKind::chord: return "chord";
        case EdgeKind::bigon_side: return "bigon-side";
    }
    return "?";
}

std::size_t TrainTrack::edge_count_at(int d) const {
    return static_cast<std::size_t>(
        std::count_if(inf_edges.begin(), inf_edges.end(), [d](const InfEdge& e) { return e.depth <= d; }));
}

const InfEdge& TrainTrack::edge(int id) const {
    auto it = std::lower_bound(inf_edges.begin(), inf_edges.end(), id,
                               [](const InfEdge& e, int v) { return e.id < v; });
    if (it == inf_edges.end() || it->id != id) throw InternalError("unknown edge id " + std::to_string(id));
    return *it;
}

// ---------------------------------------------------------------- L/R typing

LRAssignment lr_assignment(const CriticalOrbit& o) {
    if (o.N < 3) throw DomainError("L/R typing needs at least one 2-junction (N >= 3)");
    LRAssignment lr;
    auto put = [&](int j, bool right) {
        if (j == 1 || j == o.N) return;
        (right ? lr.R : lr.L).insert(j);
    };
    if (o.periodic) {
        int prev = o.succ[1];
        bool right = true;
        put(prev, right);
        for (int r = 2; r <= o.N - 2; ++r) {
            int cur = o.succ[static_cast<std::size_t>(prev)];
            if (prev >= o.c_point) right = !right;
            put(cur, right);
            prev = cur;
        }
    } else {
        int prev = o.iterate_from_top(2);
        bool right = true;
        put(prev, right);
        for (int r = 3; r <= o.N + o.l - 1; ++r) {
            int cur = o.succ[static_cast<std::size_t>(prev)];
            if (o.s[static_cast<std::size_t>(r - 1)] == 1) right = !right;
            put(cur, right);
            prev = cur;
        }
    }
    return lr;
}

// ------------------------------------------------------- junction typing

namespace {

SideTag side_of(const LRAssignment& lr, int j) {
    bool l = lr.L.count(j) > 0, r = lr.R.count(j) > 0;
    if (l && !r) return SideTag::L;
    if (r && !l) return SideTag::R;
    return SideTag::None;
}

}  // namespace

TrackDescription classify_junctions(const CriticalOrbit& o, const Rational& q, const KneadingClass& cls) {
    if (q == Rational(0)) throw DomainError("height zero: use the horseshoe description");
    if (!mia_check(strip_cover(o))) throw DomainError("transition matrix is not irreducible and aperiodic");
    const long long n = small_den(q);
    LRAssignment lr = lr_assignment(o);
    TrackDescription d;
    d.junctions.assign(static_cast<std::size_t>(o.N) + 1, {});
    auto set = [&](int j, Config c) {
        auto& jt = d.junctions[static_cast<std::size_t>(j)];
        jt.config = c;
        jt.side = side_of(lr, j);
    };
    if (o.periodic) {
        bool plus = lr.R.count(o.c_point) > 0;
        for (int r = 0; r < o.N; ++r) {
            int j = o.iterate_from_top(r);
            if (cls.tag == ClassTag::lhe)
                set(j, Config::Sp);
            else if (cls.tag == ClassTag::nbt)
                set(j, Config::BP);
            else if (r <= n + 1)
                set(j, plus ? Config::Wp : Config::Wm);
            else
                set(j, plus ? Config::V3p : Config::V3m);
        }
    } else {
        const int k = o.k;
        bool plus = lr.R.count(o.iterate_from_top(k - 1)) > 0;
        bool odd = parity(o.s.period()) == 1;
        for (int r = 0; r < o.N; ++r) {
            int j = o.iterate_from_top(r);
            Config c;
            if (cls.tag == ClassTag::rhe)
                c = r < k ? Config::B : Config::Sm;
            else if (r <= n + 1)
                c = r < k ? Config::B : (odd ? (plus ? Config::V2pB2 : Config::V2mB2) : (plus ? Config::V1pB : Config::V1mB));
            else
                c = r < k ? Config::V0 : (odd ? (plus ? Config::V2p : Config::V2m) : (plus ? Config::V1p : Config::V1m));
            set(j, c);
        }
    }
    return d;
}

TrackDescription horseshoe_description() {
    TrackDescription d;
    d.junctions.assign(3, {});
    d.junctions[1].config = Config::Sp;
    d.junctions[2].config = Config::B;
    return d;
}

TrackDescription describe_sequence(const CriticalOrbit& o, const KneadingClass& cls) {
    if (cls.tag == ClassTag::height_zero) {
        if (o.N != 2) throw DomainError("height zero outside the horseshoe");
        return horseshoe_description();
    }
    return classify_junctions(o, cls.q, cls);
}

std::string describe(const TrackDescription& d) {
    std::string out = "(";
    for (std::size_t j = 1; j < d.junctions.size(); ++j) {
        if (j > 1) out += " ; ";
        out += config_name(d.junctions[j].config);
        if (d.junctions[j].side == SideTag::L) out += ",L";
        if (d.junctions[j].side == SideTag::R) out += ",R";
    }
    return out + ")";
}

std::string describe(const TrainTrack& t) {
    if (t.depth == 0 || t.description.junctions.size() != static_cast<std::size_t>(t.orbit.N) + 1) {
        TrackDescription empty;
        empty.junctions.assign(static_cast<std::size_t>(t.orbit.N) + 1, {});
        return describe(empty);
    }
    return describe(t.description);
}

// ------------------------------------------------------------ growth engine

namespace {

enum class LayerKind { Slab, SlabRev, FoldedSlab, Passage, Fold };

struct Layer {
    LayerKind kind;
    int src;   // junction (slabs) or strip (passages, fold)
    int half;  // 0 whole strip or left half of the fold strip, 1 right half
};

std::vector<std::vector<Layer>> image_layers(const CriticalOrbit& o) {
    const int N = o.N;
    std::vector<std::vector<Layer>> layers(static_cast<std::size_t>(N) + 1);
    auto su = [&](int j) { return o.succ[static_cast<std::size_t>(j)]; };
    // Left branch [a, c]: points 1..lp, whole strips 1..ls. Right branch: points rp..N, strips rs..N-1.
    int lp, ls, rp, rs;
    if (o.periodic) {
        lp = o.c_point - 1;
        ls = o.c_point - 1;
        rp = o.c_point + 1;
        rs = o.c_point;
    } else {
        lp = o.c_gap;
        ls = o.c_gap - 1;
        rp = o.c_gap + 1;
        rs = o.c_gap + 1;
    }
    for (int t = 1; t <= N; ++t) {
        auto& out = layers[static_cast<std::size_t>(t)];
        if (t == N) {
            if (o.periodic)
                out.push_back({LayerKind::FoldedSlab, o.c_point, 0});
            else
                out.push_back({LayerKind::Fold, o.c_gap, 0});
            continue;
        }
        std::vector<Layer> lower, upper;
        for (int i = 1; i <= lp; ++i)
            if (su(i) == t) lower.push_back({LayerKind::Slab, i, 0});
        for (int j = 1; j <= ls; ++j)
            if (su(j) < t && t < su(j + 1)) lower.push_back({LayerKind::Passage, j, 0});
        for (int i = rp; i <= N; ++i)
            if (su(i) == t) upper.push_back({LayerKind::SlabRev, i, 0});
        for (int j = rs; j <= N - 1; ++j)
            if (su(j + 1) < t && t < su(j)) upper.push_back({LayerKind::Passage, j, 0});
        if (!o.periodic) {
            int j0 = o.c_gap;
            if (su(j0) < t && t < N) lower.push_back({LayerKind::Passage, j0, 0});
            if (su(j0 + 1) < t && t < N) upper.push_back({LayerKind::Passage, j0, 1});
        }
        if (lower.size() > 1 || upper.size() != 1)
            throw InternalError("junction " + std::to_string(t) + " has an impossible preimage count");
        out.insert(out.end(), lower.begin(), lower.end());
        out.insert(out.end(), upper.begin(), upper.end());
    }
    return layers;
}

// Chord instances are named by provenance: code = k * P + p is the k-th image of
// first-generation passage p. Growth never merges; amalgamation happens on output.
struct Pos {
    int side[2] = {-1, -1};
    int idx[2] = {-1, -1};
    bool through() const { return side[0] != side[1]; }
};

std::map<int, Pos> positions(const JunctionDiagram& d) {
    std::map<int, Pos> pos;
    std::map<int, int> seen;
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < static_cast<int>(d.side[s].size()); ++i) {
            int x = d.side[s][static_cast<std::size_t>(i)];
            if (x == kPuncture) continue;
            int k = seen[x]++;
            pos[x].side[k] = s;
            pos[x].idx[k] = i;
        }
    return pos;
}

// Finds one parallel pair; returns {outer/lower, inner/upper} or {-1,-1}.
std::pair<int, int> find_parallel(const JunctionDiagram& d) {
    auto pos = positions(d);
    for (int s = 0; s < 2; ++s) {
        const auto& seq = d.side[s];
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            int a = seq[i], b = seq[i + 1];
            if (a == kPuncture || b == kPuncture || a == b) continue;
            const Pos& pa = pos[a];
            const Pos& pb = pos[b];
            if (pa.through() && pb.through()) {
                if (s == 0 && pb.idx[1] == pa.idx[1] + 1) return {a, b};
            } else if (!pa.through() && !pb.through() && pa.side[0] == s && pb.side[0] == s) {
                if (pa.idx[0] == static_cast<int>(i) && pb.idx[0] == static_cast<int>(i) + 1 &&
                    pb.idx[1] + 1 == pa.idx[1])
                    return {a, b};
            }
        }
    }
    return {-1, -1};
}

// Moves the puncture marker to the first gap (in cyclic boundary order) of its face.
void canonicalize_marker(JunctionDiagram& d) {
    if (!d.punctured) return;
    std::vector<int> C;
    int marker_after = -2;  // index in C of the item preceding the marker
    for (int x : d.side[0]) {
        if (x == kPuncture)
            marker_after = static_cast<int>(C.size()) - 1;
        else
            C.push_back(x);
    }
    for (auto it = d.side[1].rbegin(); it != d.side[1].rend(); ++it) {
        if (*it == kPuncture)
            marker_after = static_cast<int>(C.size()) - 1;
        else
            C.push_back(*it);
    }
    const int n = static_cast<int>(C.size());
    if (n == 0) {
        d.side[0] = {kPuncture};
        d.side[1].clear();
        return;
    }
    if (marker_after == -2) throw InternalError("punctured junction lost its marker");
    if (marker_after < 0) marker_after = n - 1;
    std::vector<int> partner(static_cast<std::size_t>(n), -1);
    std::map<int, int> first;
    for (int i = 0; i < n; ++i) {
        auto it = first.find(C[static_cast<std::size_t>(i)]);
        if (it == first.end())
            first[C[static_cast<std::size_t>(i)]] = i;
        else {
            partner[static_cast<std::size_t>(i)] = it->second;
            partner[static_cast<std::size_t>(it->second)] = i;
        }
    }
    int best = marker_after, g = marker_after;
    for (int guard = 0; guard <= n; ++guard) {
        g = partner[static_cast<std::size_t>((g + 1) % n)];
        best = std::min(best, g);
        if (g == marker_after) break;
    }
    const int nl = static_cast<int>(std::count_if(d.side[0].begin(), d.side[0].end(), [](int x) { return x != kPuncture; }));
    for (auto& seq : d.side) seq.erase(std::remove(seq.begin(), seq.end(), kPuncture), seq.end());
    if (best < nl) {
        d.side[0].insert(d.side[0].begin() + best + 1, kPuncture);
    } else {
        int nr = n - nl;
        int r = nr - 1 - (best - nl);
        d.side[1].insert(d.side[1].begin() + r, kPuncture);
    }
}

class Grower {
public:
    explicit Grower(const CriticalOrbit& o) : o_(o), layers_(image_layers(o)) {
        for (int t = 1; t <= o.N; ++t)
            for (const Layer& ly : layers_[static_cast<std::size_t>(t)])
                if (ly.kind == LayerKind::Passage || ly.kind == LayerKind::Fold) {
                    passage_index_[key(ly.src, ly.half, t)] = 0;
                }
        int p = 0;
        for (auto& [k, v] : passage_index_) v = p++;
        P_ = p;
        d_.assign(static_cast<std::size_t>(o.N) + 1, {});
        for (int t = 1; t <= o.N; ++t) {
            auto& jd = d_[static_cast<std::size_t>(t)];
            jd.punctured = o.points[static_cast<std::size_t>(t)].periodic();
            if (jd.punctured) jd.side[0].push_back(kPuncture);
        }
    }

    void step();
    TrainTrack finish() const;

private:
    // passages ordered by strip, then half, then junction
    int key(int strip, int half, int t) const { return ((strip * 2) + half) * (o_.N + 1) + t; }

    const CriticalOrbit& o_;
    std::vector<std::vector<Layer>> layers_;
    std::map<int, int> passage_index_;
    int P_ = 0;
    std::vector<JunctionDiagram> d_;
    int generation_ = 0;
};

void Grower::step() {
    const int N = o_.N;
    ++generation_;
    std::vector<JunctionDiagram> next(static_cast<std::size_t>(N) + 1);
    for (int t = 1; t <= N; ++t) {
        JunctionDiagram& w = next[static_cast<std::size_t>(t)];
        w.punctured = d_[static_cast<std::size_t>(t)].punctured;
        for (const Layer& ly : layers_[static_cast<std::size_t>(t)]) {
            std::vector<int> add[2];
            if (ly.kind == LayerKind::Passage || ly.kind == LayerKind::Fold) {
                int code = passage_index_.at(key(ly.src, ly.half, t));
                if (ly.kind == LayerKind::Passage) {
                    add[0] = {code};
                    add[1] = {code};
                } else {
                    add[0] = {code, code};
                }
            } else {
                const JunctionDiagram& src = d_[static_cast<std::size_t>(ly.src)];
                auto img = [&](int x) { return x == kPuncture ? kPuncture : x + P_; };
                std::vector<int> sl, sr;
                for (int x : src.side[0]) sl.push_back(img(x));
                for (int x : src.side[1]) sr.push_back(img(x));
                if (ly.kind == LayerKind::Slab) {
                    add[0] = sl;
                    add[1] = sr;
                } else if (ly.kind == LayerKind::SlabRev) {
                    add[0].assign(sr.rbegin(), sr.rend());
                    add[1].assign(sl.rbegin(), sl.rend());
                } else {  // FoldedSlab
                    add[0] = sl;
                    add[0].insert(add[0].end(), sr.rbegin(), sr.rend());
                }
            }
            for (int s = 0; s < 2; ++s) w.side[s].insert(w.side[s].end(), add[s].begin(), add[s].end());
        }
        canonicalize_marker(w);
    }

    // The previous (unmerged) track must sit inside the new one unchanged.
    const int limit = (generation_ - 1) * P_;
    for (int t = 1; t <= N; ++t) {
        JunctionDiagram old_part;
        old_part.punctured = next[static_cast<std::size_t>(t)].punctured;
        for (int s = 0; s < 2; ++s)
            for (int x : next[static_cast<std::size_t>(t)].side[s])
                if (x == kPuncture || x < limit) old_part.side[s].push_back(x);
        canonicalize_marker(old_part);
        if (old_part.side[0] != d_[static_cast<std::size_t>(t)].side[0] ||
            old_part.side[1] != d_[static_cast<std::size_t>(t)].side[1])
            throw InternalError("growth step " + std::to_string(generation_) + " rearranged junction " +
                                std::to_string(t));
    }
    d_ = std::move(next);
}

TrainTrack Grower::finish() const {
    const int N = o_.N;
    TrainTrack tr;
    tr.orbit = o_;
    tr.depth = generation_;
    tr.junctions.assign(static_cast<std::size_t>(N) + 1, {});
    tr.b_rows.assign(static_cast<std::size_t>(N), {});

    // Amalgamate: class representative = smallest provenance code.
    std::map<int, int> cls;  // code -> class id
    for (int t = 1; t <= N; ++t) {
        JunctionDiagram w = d_[static_cast<std::size_t>(t)];
        std::map<int, std::vector<int>> members;
        for (int s = 0; s < 2; ++s)
            for (int x : w.side[s])
                if (x != kPuncture) members[x] = {x};
        for (;;) {
            auto [a, b] = find_parallel(w);
            if (a < 0) break;
            auto& ma = members[a];
            ma.insert(ma.end(), members[b].begin(), members[b].end());
            members.erase(b);
            for (auto& seq : w.side) seq.erase(std::remove(seq.begin(), seq.end(), b), seq.end());
        }
        std::map<int, int> rename;
        for (auto& [rep, ms] : members) {
            int id = *std::min_element(ms.begin(), ms.end());
            rename[rep] = id;
            for (int x : ms) cls[x] = id;
        }
        JunctionDiagram& out = tr.junctions[static_cast<std::size_t>(t)];
        out.punctured = w.punctured;
        for (int s = 0; s < 2; ++s)
            for (int x : w.side[s]) out.side[s].push_back(x == kPuncture ? kPuncture : rename.at(x));
        canonicalize_marker(out);
    }

    for (auto [code, id] : cls) {
        int image = code + P_;
        auto it = cls.find(image);
        if (it == cls.end()) continue;
        auto [pos, fresh] = tr.pi_map.emplace(id, it->second);
        if (!fresh && pos->second != it->second)
            throw InternalError("edge " + std::to_string(id) + " has two images after amalgamation");
    }
    for (auto& [k, p] : passage_index_) {
        int strip = (k / (N + 1)) / 2;
        ++tr.b_rows[static_cast<std::size_t>(strip)][cls.at(p)];
    }

    for (int t = 1; t <= N; ++t) {
        const JunctionDiagram& jd = tr.junctions[static_cast<std::size_t>(t)];
        auto pos = positions(jd);
        int through = 0;
        for (auto& [id, ps] : pos) through += ps.through();
        for (auto& [id, ps] : pos) {
            InfEdge e;
            e.id = id;
            e.junction = t;
            e.depth = id / P_ + 1;
            for (int k = 0; k < 2; ++k) e.ends[k] = {t, static_cast<Side>(ps.side[k])};
            if (ps.through()) {
                e.kind = through > 1 ? EdgeKind::bigon_side : EdgeKind::chord;
            } else {
                const auto& seq = jd.side[ps.side[0]];
                bool empty_inside = true;
                for (int i = ps.idx[0] + 1; i < ps.idx[1]; ++i) {
                    if (seq[static_cast<std::size_t>(i)] == kPuncture)
                        e.encloses_puncture = true;
                    else
                        empty_inside = false;
                }
                e.kind = empty_inside ? EdgeKind::bubble : EdgeKind::loop;
            }
            tr.inf_edges.push_back(e);
        }
    }
    std::sort(tr.inf_edges.begin(), tr.inf_edges.end(), [](const InfEdge& a, const InfEdge& b) { return a.id < b.id; });
    return tr;
}

}  // namespace

TrainTrack grow_invariant_track(const CriticalOrbit& o, int depth) {
    if (depth < 0) throw DomainError("depth must be nonnegative");
    if (o.N < 2) throw DomainError("orbit too small for a train track");
    Grower g(o);
    for (int i = 0; i < depth; ++i) g.step();
    return g.finish();
}

}  // namespace gpa

// ---------------------------------------------------------------- shapes and validation

namespace gpa {

namespace {

struct Node {
    enum Kind { Cap, Chord, Punct } kind;
    int id;
    std::vector<Node> kids;
};

// Nesting tree of one switch, bottom to top.
std::vector<Node> side_tree(const JunctionDiagram& d, int s) {
    auto pos = positions(d);
    std::vector<std::vector<Node>> stack(1);
    std::vector<int> open;
    for (int x : d.side[s]) {
        if (x == kPuncture) {
            stack.back().push_back({Node::Punct, x, {}});
        } else if (pos.at(x).through()) {
            stack.back().push_back({Node::Chord, x, {}});
        } else if (!open.empty() && open.back() == x) {
            Node n{Node::Cap, x, std::move(stack.back())};
            stack.pop_back();
            open.pop_back();
            stack.back().push_back(std::move(n));
        } else {
            open.push_back(x);
            stack.emplace_back();
        }
    }
    if (!open.empty()) throw InternalError("unbalanced loop in junction diagram");
    return stack.front();
}

bool has_punct(const Node& n) {
    if (n.kind == Node::Punct) return true;
    return std::any_of(n.kids.begin(), n.kids.end(), has_punct);
}

bool is_bubble(const Node& n) {
    return n.kind == Node::Cap &&
           std::all_of(n.kids.begin(), n.kids.end(), [](const Node& k) { return k.kind == Node::Punct; });
}

int nesting(const Node& n) {
    int m = 0;
    for (const Node& k : n.kids) m = std::max(m, nesting(k));
    return n.kind == Node::Cap ? m + 1 : m;
}

void count_caps(const Node& n, JunctionShape& sh, int s) {
    if (n.kind != Node::Cap) return;
    ++sh.loops[s];
    if (is_bubble(n) && !has_punct(n)) ++sh.bubbles;
    if (has_punct(n)) ++sh.enclosing;
    for (const Node& k : n.kids) count_caps(k, sh, s);
}

// Counterclockwise order runs up the L switch and down the R switch.
std::vector<const Node*> ccw(const std::vector<Node>& v, int s) {
    std::vector<const Node*> out;
    for (const Node& n : v) out.push_back(&n);
    if (s == 1) std::reverse(out.begin(), out.end());
    return out;
}

struct Checker {
    const TrainTrack& tr;
    int t;
    const JunctionType& jt;
    std::vector<std::string>& bad;
    std::vector<std::string>& notes;
    bool settled;  // every feature of the configuration has had time to appear

    void fail(const std::string& m) { bad.push_back("junction " + std::to_string(t) + ": " + m); }
    void note(const std::string& m) { notes.push_back("junction " + std::to_string(t) + ": " + m); }
    // Absent feature: expected at a shallow truncation, a mismatch once settled.
    void missing(const std::string& m) {
        if (settled)
            fail(m);
        else
            note("insufficient depth: " + m);
    }
    int depth_of(int id) const { return tr.edge(id).depth; }
};

// Side(s) on which loops may sit.
std::vector<int> loop_sides(const JunctionType& jt, int t, int N) {
    if (t == 1) return {1};
    if (t == N) return {0};
    if (jt.side == SideTag::L) return {0};
    if (jt.side == SideTag::R) return {1};
    return {0, 1};
}

void check_single_chord_position(Checker& c, const std::vector<Node> trees[2], int through) {
    // With one through chord, loops sit below it on R and above it on L.
    if (through != 1) return;
    for (int s = 0; s < 2; ++s) {
        bool seen_chord = false;
        for (const Node& n : trees[s]) {
            if (n.kind == Node::Chord) seen_chord = true;
            if (n.kind == Node::Cap && (s == 0) != seen_chord)
                c.fail(std::string("loop on the wrong side of the through chord at the ") + (s == 0 ? "L" : "R") +
                       " switch");
        }
    }
}

// Nested chain of puncture-enclosing loops, each holding one bubble beside the next loop.
void check_w_chain(Checker& c, const Node& outer, int s, bool plus) {
    const Node* cur = &outer;
    int links = 0;
    for (;;) {
        const Node* inner = nullptr;
        const Node* bubble = nullptr;
        int others = 0;
        for (const Node& k : cur->kids) {
            if (k.kind == Node::Punct || (k.kind == Node::Cap && has_punct(k)))
                inner = &k;
            else if (is_bubble(k) && !bubble)
                bubble = &k;
            else
                ++others;
        }
        if (!inner) {
            c.fail("nested loop chain is malformed");
            return;
        }
        // The innermost loop may also hold the newest bubble, which shares the puncture's face.
        if (inner->kind == Node::Punct) {
            if (others > 1) c.fail("nested loop chain is malformed");
            break;
        }
        if (others > 0) {
            c.fail("nested loop chain is malformed");
            return;
        }
        if (!bubble) {
            c.fail("enclosing loop without its bubble");
            return;
        }
        auto order = ccw(cur->kids, s);
        bool bubble_first = std::find(order.begin(), order.end(), bubble) <
                            std::find(order.begin(), order.end(), inner);
        if (bubble_first != plus) c.fail(std::string("loop chirality is ") + (plus ? "-" : "+"));
        ++links;
        cur = inner;
    }
    if (links == 0) c.missing("no nested loop to fix chirality");
}

// Gap analysis for bigon configurations with accumulating chords.
void check_bigon(Checker& c, const std::vector<Node> trees[2], Config cfg) {
    const bool two = cfg == Config::V2p || cfg == Config::V2m || cfg == Config::V2pB2 || cfg == Config::V2mB2;
    const bool extra = cfg == Config::V1pB || cfg == Config::V1mB || cfg == Config::V2pB2 || cfg == Config::V2mB2;
    const bool v0 = cfg == Config::V0;

    // Per switch: for each gap between chords, the caps in it; and the gap holding the puncture.
    std::vector<std::vector<const Node*>> gaps[2];
    int punct_gap = -1;
    int T = 0;
    for (int s = 0; s < 2; ++s) {
        gaps[s].assign(1, {});
        for (const Node& n : trees[s]) {
            if (n.kind == Node::Chord)
                gaps[s].emplace_back();
            else if (n.kind == Node::Punct)
                punct_gap = static_cast<int>(gaps[s].size()) - 1;
            else {
                if (has_punct(n)) c.fail("a loop encloses the puncture");
                if (!is_bubble(n)) c.fail("a loop that is not a bubble");
                gaps[s].back().push_back(&n);
            }
        }
        T = static_cast<int>(gaps[s].size()) - 1;
    }
    if (T < 2) {
        c.missing("bigon needs two through chords, found " + std::to_string(T));
        return;
    }
    auto count = [&](int s, int g) { return static_cast<int>(gaps[s][static_cast<std::size_t>(g)].size()); };

    if (v0) {
        for (int s = 0; s < 2; ++s)
            if (count(s, 0) + count(s, T) > 0) c.fail("bubble outside the bigon");
        int inside = 0;
        for (int s = 0; s < 2; ++s)
            for (int g = 1; g < T; ++g) inside += count(s, g);
        if (inside > 1) c.fail("bigon holds " + std::to_string(inside) + " bubbles, expected 1");
        if (inside == 0) c.missing("bigon holds no bubble");
        return;
    }
    if (punct_gap < 0) {
        c.fail("puncture missing");
        return;
    }

    // A chord accumulates if a bubble sits on its outer side (away from the puncture).
    // Inner gaps between accumulating chords hold one bubble on a single switch.
    int externals = 0;
    int acc_side[2] = {-1, -1};  // switch carrying bubbles for the lower / upper accumulation
    int acc_count[2] = {0, 0};
    for (int g = 0; g <= T; ++g) {
        if (g == punct_gap) {
            // Only the newest bubble can share the puncture's face.
            if (count(0, g) + count(1, g) > 1) c.fail("bubbles beside the puncture");
            continue;
        }
        int half = g < punct_gap ? 0 : 1;
        int n0 = count(0, g), n1 = count(1, g);
        if (n0 + n1 == 0) continue;
        if (n0 + n1 > 1 || (n0 && n1)) {
            c.fail("gap " + std::to_string(g) + " holds more than one bubble");
            continue;
        }
        int s = n0 ? 0 : 1;
        if (acc_side[half] >= 0 && acc_side[half] != s) c.fail("bubbles of one accumulation on both switches");
        acc_side[half] = s;
        ++acc_count[half];
        if (g == 0 || g == T) ++externals;
    }
    // Inner gaps of an accumulation must all be filled.
    for (int half = 0; half < 2; ++half) {
        if (acc_count[half] == 0) continue;
        int lo = half == 0 ? 1 : punct_gap + 1;
        int hi = half == 0 ? punct_gap - 1 : T - 1;
        for (int g = lo; g <= hi; ++g)
            if (count(0, g) + count(1, g) == 0) c.missing("empty gap " + std::to_string(g) + " inside an accumulation");
    }
    const int halves = (acc_count[0] > 0) + (acc_count[1] > 0);
    if (two) {
        if (halves == 2 && acc_side[0] == acc_side[1]) c.fail("both accumulations carry bubbles on the same switch");
        if (halves < 2) c.missing("fewer than two accumulations");
    } else {
        if (halves == 2) c.fail("accumulations on both sides of the puncture");
        int s = acc_count[0] ? acc_side[0] : acc_side[1];
        if (c.jt.side != SideTag::None && s >= 0 && s != (c.jt.side == SideTag::L ? 0 : 1))
            c.fail("bubbles attached to the wrong switch");
        if (halves == 0) c.missing("no accumulation");
    }
    const int want = extra ? (two ? 2 : 1) : 0;
    if (externals > want)
        c.fail(std::to_string(externals) + " external bubbles, expected " + std::to_string(want));
    else if (externals < want)
        c.missing(std::to_string(externals) + " external bubbles, expected " + std::to_string(want));
    c.note("orientation sign not determined by junction combinatorics");
}

void check_junction(Checker& c) {
    const TrainTrack& tr = c.tr;
    const int t = c.t;
    const int N = tr.orbit.N;
    const JunctionDiagram& jd = tr.junctions[static_cast<std::size_t>(t)];
    const Config cfg = c.jt.config;
    std::vector<Node> trees[2] = {side_tree(jd, 0), side_tree(jd, 1)};
    const JunctionShape sh = junction_shape(tr, t);
    const bool want_punct = tr.orbit.points[static_cast<std::size_t>(t)].periodic();
    if (jd.punctured != want_punct) c.fail("puncture flag disagrees with the orbit");

    const bool is_bigon = cfg == Config::V0 || cfg == Config::V1p || cfg == Config::V1m || cfg == Config::V1pB ||
                          cfg == Config::V1mB || cfg == Config::V2p || cfg == Config::V2m || cfg == Config::V2pB2 ||
                          cfg == Config::V2mB2;
    auto sides = loop_sides(c.jt, t, N);
    for (int s = 0; s < 2; ++s)
        if (sh.loops[s] > 0 && std::find(sides.begin(), sides.end(), s) == sides.end())
            c.fail(std::string("loops attached to the ") + (s == 0 ? "L" : "R") + " switch");

    const int one_junction = (t == 1 || t == N) ? 0 : 1;
    if (!is_bigon && cfg != Config::V3p && cfg != Config::V3m && cfg != Config::Empty) {
        if (sh.through > one_junction)
            c.fail(std::to_string(sh.through) + " through chords, expected " + std::to_string(one_junction));
        if (sh.through < one_junction) c.missing("through chord absent");
        check_single_chord_position(c, trees, sh.through);
    }

    // Loops at the attaching switch, top level.
    auto caps_on = [&](int s) {
        std::vector<const Node*> v;
        for (const Node& n : trees[s])
            if (n.kind == Node::Cap) v.push_back(&n);
        return v;
    };

    switch (cfg) {
    case Config::Empty:
        if (sh.through + sh.loops[0] + sh.loops[1] > 0) c.fail("expected no infinitesimal edges");
        break;
    case Config::B:
        if (sh.loops[0] + sh.loops[1] == 0)
            c.missing("bubble absent");
        else if (sh.loops[0] + sh.loops[1] != 1 || sh.bubbles != 1)
            c.fail("expected a single bubble");
        break;
    case Config::BP: {
        if (sh.loops[0] + sh.loops[1] == 0) {
            c.missing("puncture bubble absent");
            break;
        }
        if (sh.loops[0] + sh.loops[1] != 1 || sh.enclosing != 1) {
            c.fail("expected a single bubble around the puncture");
            break;
        }
        auto caps = caps_on(sides.front());
        if (caps.size() != 1) {
            c.fail("puncture loop attached to the wrong switch");
            break;
        }
        if (caps.front()->kids.size() != 1 || caps.front()->kids.front().kind != Node::Punct)
            c.fail("puncture loop holds other edges");
        break;
    }
    case Config::Sp:
    case Config::Sm: {
        if (sh.enclosing > 0) c.fail("a loop encloses the puncture");
        if (sh.bubbles != sh.loops[0] + sh.loops[1]) c.fail("nested loops in a bouquet");
        std::vector<int> depths;
        for (int s : sides)
            for (const Node* n : ccw(trees[s], s))
                if (n->kind == Node::Cap) depths.push_back(c.depth_of(n->id));
        if (depths.size() < 2) {
            c.missing("fewer than two bubbles to fix chirality");
            break;
        }
        bool inc = std::is_sorted(depths.begin(), depths.end(), std::less<int>()) &&
                   std::adjacent_find(depths.begin(), depths.end()) == depths.end();
        bool dec = std::is_sorted(depths.begin(), depths.end(), std::greater<int>()) &&
                   std::adjacent_find(depths.begin(), depths.end()) == depths.end();
        if (cfg == Config::Sp ? !inc : !dec) c.fail("bubble generations are not ordered as the sign requires");
        break;
    }
    case Config::Wp:
    case Config::Wm:
    case Config::V3p:
    case Config::V3m: {
        const bool plus = cfg == Config::Wp || cfg == Config::V3p;
        const bool v3 = cfg == Config::V3p || cfg == Config::V3m;
        if (v3 && sh.through > 2) c.fail(std::to_string(sh.through) + " through chords, expected a bigon");
        const int s = sides.size() == 1 ? sides.front() : -1;
        if (s < 0) {
            c.fail("nested configuration needs a side");
            break;
        }
        if (v3 && sh.through < 2) c.missing("bigon incomplete");
        auto caps = caps_on(s);
        const bool enclosed = std::any_of(caps.begin(), caps.end(), [](const Node* n) { return has_punct(*n); });
        if (!enclosed) {
            // Before the first enclosing loop forms, only new bubbles share the puncture's face.
            if (caps.size() > 2 || !std::all_of(caps.begin(), caps.end(), [](const Node* n) { return is_bubble(*n); }))
                c.fail("loops around the puncture are malformed");
            c.missing("no nested loops");
            break;
        }
        if (caps.size() != 1) {
            c.fail("expected one outer loop around the puncture");
            break;
        }
        if (v3) {
            // The outer loop must lie between the two bigon sides.
            int before = 0, after = 0;
            bool passed = false;
            for (const Node& n : trees[s]) {
                if (&n == caps.front()) passed = true;
                if (n.kind == Node::Chord) (passed ? after : before)++;
            }
            if (before != 1 || after != 1) c.fail("nested loops are not inside the bigon");
        }
        check_w_chain(c, *caps.front(), s, plus);
        break;
    }
    default:
        check_bigon(c, trees, cfg);
        break;
    }
}

}  // namespace

JunctionShape junction_shape(const TrainTrack& tr, int t) {
    if (t < 1 || t > tr.orbit.N) throw DomainError("junction index out of range");
    const JunctionDiagram& jd = tr.junctions[static_cast<std::size_t>(t)];
    JunctionShape sh;
    auto pos = positions(jd);
    for (auto& [id, p] : pos) sh.through += p.through();
    for (int s = 0; s < 2; ++s) {
        auto tree = side_tree(jd, s);
        int chords_below = 0;
        for (const Node& n : tree) {
            if (n.kind == Node::Chord) ++chords_below;
            if (has_punct(n)) sh.through_below_puncture = chords_below;
            count_caps(n, sh, s);
            sh.max_nesting = std::max(sh.max_nesting, nesting(n));
        }
    }
    return sh;
}

int settle_depth(int N) { return 3 * N + 2; }

ValidationReport validate_track(const TrainTrack& track, const TrackDescription& desc, int depth) {
    if (depth < 0 || depth > track.depth)
        throw DomainError("validation depth " + std::to_string(depth) + " exceeds track depth " +
                          std::to_string(track.depth));
    TrainTrack grown;
    const TrainTrack* tr = &track;
    if (depth != track.depth) {
        grown = grow_invariant_track(track.orbit, depth);
        tr = &grown;
    }
    const int N = track.orbit.N;
    if (static_cast<int>(desc.junctions.size()) != N + 1) throw DomainError("description size does not match orbit");
    ValidationReport rep;
    for (int t = 1; t <= N; ++t) {
        std::vector<std::string> bad;
        Checker c{*tr, t, desc.junctions[static_cast<std::size_t>(t)], bad, rep.notes, depth >= settle_depth(N)};
        check_junction(c);
        if (!bad.empty() && rep.first_mismatch == 0) rep.first_mismatch = t;
        rep.mismatches.insert(rep.mismatches.end(), bad.begin(), bad.end());
    }
    rep.pass = rep.mismatches.empty();
    return rep;
}

}  // namespace gpa
