#include "gpa/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "gpa/errors.hpp"

namespace gpa {

namespace {

std::string side_tag_name(SideTag t) {
    switch (t) {
        case SideTag::L: return "L";
        case SideTag::R: return "R";
        case SideTag::None: return "";
    }
    return "";
}

SideTag parse_side_tag(const Json& j) {
    if (j.is_null()) return SideTag::None;
    const std::string v = j.get<std::string>();
    if (v == "L") return SideTag::L;
    if (v == "R") return SideTag::R;
    if (v.empty()) return SideTag::None;
    throw DomainError("bad side tag \"" + v + "\"");
}

EdgeKind parse_kind(const std::string& k) {
    for (EdgeKind e : {EdgeKind::bubble, EdgeKind::loop, EdgeKind::chord, EdgeKind::bigon_side})
        if (kind_name(e) == k) return e;
    throw DomainError("bad edge kind \"" + k + "\"");
}

std::string side_str(Side s) { return s == Side::L ? "L" : "R"; }

Side parse_side(const std::string& s) {
    if (s == "L") return Side::L;
    if (s == "R") return Side::R;
    throw DomainError("bad switch side \"" + s + "\"");
}

Json point_json(const OutsidePoint& p) {
    return Json{{"half", half_name(p.half)}, {"itinerary", p.itinerary.str()}, {"label", point_str(p)}};
}

Json ends_json(const std::vector<int>& ends) {
    Json a = Json::array();
    for (int x : ends) a.push_back(x == kPuncture ? Json("*") : Json(x));
    return a;
}

std::vector<int> ends_from_json(const Json& a) {
    std::vector<int> out;
    for (const auto& x : a) out.push_back(x.is_string() ? kPuncture : x.get<int>());
    return out;
}

}  // namespace

Json words_json(const HeightWords& hw) {
    return Json{{"kappa", hw.kappa},       {"c_q", to_string(hw.c_q)}, {"w_q", to_string(hw.w_q)},
                {"w_hat_q", to_string(hw.w_hat_q)}, {"lhe", hw.lhe.str()},  {"nbt", hw.nbt.str()},
                {"rhe", hw.rhe.str()}};
}

Json class_json(const BinarySeq& s, const KneadingClass& cls) {
    Json j{{"s", s.str()}, {"q", cls.q.str()}, {"tag", tag_name(cls.tag)}};
    if (cls.tag != ClassTag::height_zero) j["words"] = words_json(height_words(cls.q));
    else j["words"] = nullptr;
    return j;
}

Json orbit_json(const CriticalOrbit& orbit, const StripCover& cover) {
    Json j{{"s", orbit.s.str()}, {"N", orbit.N}, {"periodic", orbit.periodic}};
    j["succ"] = std::vector<int>(orbit.succ.begin() + 1, orbit.succ.end());
    Json pts = Json::array();
    for (int i = 1; i <= orbit.N; ++i) pts.push_back(orbit.points[static_cast<std::size_t>(i)].str());
    j["points"] = pts;
    if (orbit.periodic) j["c_point"] = orbit.c_point;
    else j["c_gap"] = orbit.c_gap;
    j["A"] = cover.A;
    return j;
}

Json track_json(const TrainTrack& track) {
    Json j;
    j["s"] = track.orbit.s.str();
    j["depth"] = track.depth;
    Json desc = Json::array();
    for (std::size_t t = 1; t < track.description.junctions.size(); ++t) {
        const auto& jt = track.description.junctions[t];
        desc.push_back({{"config", config_name(jt.config)},
                        {"side", jt.side == SideTag::None ? Json(nullptr) : Json(side_tag_name(jt.side))}});
    }
    j["description"] = desc;
    Json edges = Json::array();
    for (const InfEdge& e : track.inf_edges)
        edges.push_back({{"id", e.id},
                         {"junction", e.junction},
                         {"kind", kind_name(e.kind)},
                         {"depth", e.depth},
                         {"puncture", e.encloses_puncture},
                         {"ends", Json::array({side_str(e.ends[0].side), side_str(e.ends[1].side)})}});
    j["inf_edges"] = edges;
    Json pi = Json::array();
    for (auto [from, to] : track.pi_map) pi.push_back({from, to});
    j["pi"] = pi;
    Json b = Json::array();
    for (std::size_t r = 1; r < track.b_rows.size(); ++r)
        for (auto [id, cnt] : track.b_rows[r]) b.push_back({static_cast<int>(r), id, cnt});
    j["b"] = b;
    Json junctions = Json::array();
    for (std::size_t t = 1; t < track.junctions.size(); ++t) {
        const auto& d = track.junctions[t];
        junctions.push_back({{"L", ends_json(d.side[0])}, {"R", ends_json(d.side[1])}, {"punctured", d.punctured}});
    }
    j["junctions"] = junctions;
    return j;
}

TrackDescription description_from_json(const Json& j) {
    TrackDescription d;
    d.junctions.resize(1);
    for (const auto& x : j.at("description"))
        d.junctions.push_back({parse_config(x.at("config").get<std::string>()), parse_side_tag(x.at("side"))});
    return d;
}

TrainTrack track_from_json(const Json& j) {
    try {
        TrainTrack tr;
        tr.orbit = critical_orbit(parse_seq(j.at("s").get<std::string>()));
        const auto N = static_cast<std::size_t>(tr.orbit.N);
        tr.depth = j.at("depth").get<int>();
        tr.description = description_from_json(j);
        if (tr.description.junctions.size() != N + 1) throw DomainError("description length differs from N");
        for (const auto& x : j.at("inf_edges")) {
            InfEdge e;
            e.id = x.at("id").get<int>();
            e.junction = x.at("junction").get<int>();
            e.kind = parse_kind(x.at("kind").get<std::string>());
            e.depth = x.at("depth").get<int>();
            e.encloses_puncture = x.at("puncture").get<bool>();
            const auto& ends = x.at("ends");
            for (int k = 0; k < 2; ++k) e.ends[k] = {e.junction, parse_side(ends.at(k).get<std::string>())};
            tr.inf_edges.push_back(e);
        }
        for (const auto& p : j.at("pi")) tr.pi_map[p.at(0).get<int>()] = p.at(1).get<int>();
        tr.b_rows.assign(N, {});
        for (const auto& b : j.at("b")) {
            const int r = b.at(0).get<int>();
            if (r < 1 || static_cast<std::size_t>(r) >= N) throw DomainError("b row out of range");
            tr.b_rows[static_cast<std::size_t>(r)][b.at(1).get<int>()] = b.at(2).get<int>();
        }
        tr.junctions.assign(N + 1, {});
        const auto& js = j.at("junctions");
        if (js.size() != N) throw DomainError("junction list length differs from N");
        for (std::size_t t = 1; t <= N; ++t) {
            tr.junctions[t].side[0] = ends_from_json(js[t - 1].at("L"));
            tr.junctions[t].side[1] = ends_from_json(js[t - 1].at("R"));
            tr.junctions[t].punctured = js[t - 1].at("punctured").get<bool>();
        }
        return tr;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed track JSON: ") + e.what());
    }
}

Json spectrum_json(const SpectralData& d) {
    Json yp = Json::array();
    for (auto [id, w] : d.Yp) yp.push_back({{"edge", id}, {"weight", w}});
    return Json{{"lambda", d.lambda},         {"X", d.X},
                {"Y", d.Y},                   {"Yp", yp},
                {"tail_bound", d.tail_bound}, {"switch_residual", d.switch_residual},
                {"exact", d.exact}};
}

std::vector<double> heights_from_json(const Json& j) {
    try {
        return j.at("Y").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed spectrum JSON: ") + e.what());
    }
}

std::map<int, double> inf_heights_from_json(const Json& j) {
    try {
        std::map<int, double> out;
        for (const auto& x : j.at("Yp")) out[x.at("edge").get<int>()] = x.at("weight").get<double>();
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed spectrum JSON: ") + e.what());
    }
}

Json outside_json(const OutsideOrbit& o) {
    Json steps = Json::array(), lam = Json::array(), extras = Json::array();
    for (const auto& p : o.steps) steps.push_back(point_json(p));
    for (const auto& p : o.lambda_orbit) lam.push_back(point_json(p));
    for (const auto& p : o.extras) extras.push_back(point_json(p));
    return Json{{"n", o.n},         {"case", case_name(o.kase)}, {"steps", steps},
                {"lambda_orbit", lam}, {"rotation", o.rotation.str()}, {"extras", extras}};
}

Json census_json(const SingularityCensus& c) {
    Json orbit = Json::array();
    for (const auto& p : c.one_prong_orbit) {
        if (p.vertical) orbit.push_back({{"type", "vertical"}, {"edge", p.edge}, {"junction", p.junction}});
        else orbit.push_back({{"type", "horizontal"}, {"level", p.level}});
    }
    Json sp = Json::array();
    for (const auto& p : c.special_points)
        sp.push_back({{"kind", p.kind}, {"location", p.location}, {"prongs", p.prongs}});
    return Json{{"one_prong_orbit", orbit},
                {"one_prongs_listed", c.one_prong_orbit.size()},
                {"single_orbit", c.single_orbit},
                {"finite", c.finite},
                {"asymptotics", asymptotics_name(c.asymptotics)},
                {"three_prongs", c.three_prongs},
                {"special_points", sp},
                {"notes", c.notes}};
}

Json moduli_json(const ModuliReport& m) {
    Json j{{"case", horizontal_case_name(m.hcase)}};
    if (m.hcase == HorizontalCase::endpoint) {
        j["w"] = m.w;
        j["W"] = m.W;
        j["w_v"] = m.w_v;
        j["w_h"] = m.w_h;
        j["C1"] = m.C1;
        j["C2"] = m.C2;
        j["C3"] = m.C3;
        Json rows = Json::array();
        for (const auto& e : m.endpoint)
            rows.push_back({{"k", e.k},
                            {"r_k", e.r_k},
                            {"width", e.width},
                            {"area_bound", e.area_bound},
                            {"bound", e.bound},
                            {"partial_sum", e.partial_sum}});
        j["bounds"] = rows;
        j["target"] = m.target;
        j["target_k"] = m.target_k ? Json(*m.target_k) : Json(nullptr);
    }
    Json js = Json::array();
    for (const auto& e : m.junctions)
        js.push_back({{"junction", e.junction},
                      {"config", e.config},
                      {"mu", e.mu},
                      {"w", e.w},
                      {"c", e.c},
                      {"C", e.C},
                      {"bound", e.bound},
                      {"max_k_deviation", e.max_k_deviation}});
    if (m.hcase == HorizontalCase::generic) j["junctions"] = js;
    j["notes"] = m.notes;
    return j;
}

Json points_json(const std::vector<ComplexPoint>& pts) {
    Json a = Json::array();
    for (const auto& p : pts) a.push_back({{"strip", p.strip}, {"x", p.x}, {"y", p.y}});
    return a;
}

std::string points_csv(const std::vector<ComplexPoint>& pts) {
    std::ostringstream out;
    out.precision(17);
    out << "strip,x,y\n";
    for (const auto& p : pts) out << p.strip << ',' << p.x << ',' << p.y << '\n';
    return out.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    const fs::path tmp = dir / ("." + target.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DomainError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw DomainError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw DomainError("cannot rename into " + path);
    }
}

}  // namespace gpa
