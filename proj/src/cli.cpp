#include "gpa/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gpa/errors.hpp"
#include "gpa/io.hpp"
#include "gpa/pipeline.hpp"

namespace gpa {

namespace {

std::string num(double x, int prec = 12) {
    std::ostringstream o;
    o << std::setprecision(prec) << x;
    return o.str();
}

std::string fixed(double x, int prec = 12) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(prec) << x;
    return o.str();
}

std::string list(const std::vector<double>& v, int prec = 12) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i], prec);
    return out + ")";
}

struct Options {
    std::string seq;
    std::string rational;
    std::optional<int> depth;
    bool json = false;
    bool csv = false;
    bool describe_only = false;
    double tol = 1e-12;
    std::optional<int> steps;
    std::string point;
    int count = 10;
    double target = 1.0;
    int max_period = 8;
    int threads = 0;
    std::string output;
};

void text_word(std::ostream& o, const HeightWords& hw) {
    o << "q: " << hw.q.str() << '\n' << "kappa:";
    for (long long k : hw.kappa) o << ' ' << k;
    o << '\n'
      << "c_q: " << to_string(hw.c_q) << '\n'
      << "w_q: " << to_string(hw.w_q) << '\n'
      << "w_hat_q: " << to_string(hw.w_hat_q) << '\n'
      << "lhe: " << hw.lhe.str() << '\n'
      << "NBT: " << hw.nbt.str() << '\n'
      << "rhe: " << hw.rhe.str() << '\n';
}

void cmd_word(const Options& op, std::ostream& o) {
    const HeightWords hw = height_words(parse_rational(op.rational));
    if (op.json) o << words_json(hw).dump(2) << '\n';
    else text_word(o, hw);
}

void cmd_height(const Options& op, std::ostream& o) {
    const BinarySeq s = parse_seq(op.seq);
    const KneadingClass cls = classify(s);
    if (op.json) o << class_json(s, cls).dump(2) << '\n';
    else o << cls.q.str() << '\n';
}

void cmd_classify(const Options& op, std::ostream& o) {
    const BinarySeq s = parse_seq(op.seq);
    const KneadingClass cls = classify(s);
    if (op.json) {
        o << class_json(s, cls).dump(2) << '\n';
        return;
    }
    o << tag_name(cls.tag) << ' ' << cls.q.str() << '\n';
    if (cls.tag != ClassTag::height_zero) text_word(o, height_words(cls.q));
}

void cmd_orbit(const Options& op, std::ostream& o) {
    const CriticalOrbit orb = critical_orbit(parse_seq(op.seq));
    const StripCover cov = strip_cover(orb);
    if (op.json) {
        o << orbit_json(orb, cov).dump(2) << '\n';
        return;
    }
    o << "N: " << orb.N << (orb.periodic ? " (periodic, map pi)" : " (preperiodic, map rho)") << '\n';
    o << "point  itinerary  image\n";
    for (int i = 1; i <= orb.N; ++i)
        o << std::setw(5) << i << "  " << orb.points[static_cast<std::size_t>(i)].str() << "  "
          << orb.succ[static_cast<std::size_t>(i)] << '\n';
    if (orb.periodic) o << "c: point " << orb.c_point << '\n';
    else o << "c: inside strip " << orb.c_gap << " (between points " << orb.c_gap << " and " << orb.c_gap + 1 << ")\n";
    o << "A:\n";
    for (const auto& row : cov.A) {
        for (std::size_t j = 0; j < row.size(); ++j) o << (j ? " " : "") << row[j];
        o << '\n';
    }
}

void cmd_track(const Options& op, std::ostream& o) {
    const Pipeline p = run_pipeline(parse_seq(op.seq), op.depth, op.tol);
    if (op.describe_only) {
        o << describe(p.track.description) << '\n';
        return;
    }
    if (op.json) {
        o << track_json(p.track).dump(2) << '\n';
        return;
    }
    const ValidationReport rep = validate_track(p.track, p.track.description, p.depth);
    o << "description: " << describe(p.track.description) << '\n'
      << "depth: " << p.depth << '\n'
      << "infinitesimal edges: " << p.track.inf_edges.size() << '\n'
      << "pi entries: " << p.track.pi_map.size() << '\n'
      << "validation: " << (rep.pass ? "pass" : "fail") << '\n';
    for (const auto& m : rep.mismatches) o << "  mismatch: " << m << '\n';
    for (const auto& n : rep.notes) o << "  note: " << n << '\n';
    o << "junction  config  edges\n";
    for (int t = 1; t <= p.orbit.N; ++t) {
        int count = 0;
        for (const auto& e : p.track.inf_edges) count += e.junction == t;
        const auto& jt = p.track.description.junctions[static_cast<std::size_t>(t)];
        o << std::setw(8) << t << "  " << config_name(jt.config) << (jt.side == SideTag::L ? ",L" : "")
          << (jt.side == SideTag::R ? ",R" : "") << "  " << count << '\n';
    }
}

void cmd_spectrum(const Options& op, std::ostream& o) {
    const Pipeline p = run_pipeline(parse_seq(op.seq), op.depth, op.tol);
    const SpectralData& d = p.spectral;
    if (op.json) {
        o << spectrum_json(d).dump(2) << '\n';
        return;
    }
    double sum = 0;
    for (auto [id, w] : d.Yp) sum += w;
    o << "lambda: " << fixed(d.lambda) << '\n'
      << "X: " << list(d.X) << '\n'
      << "Y: " << list(d.Y) << '\n'
      << "depth: " << p.depth << (d.exact ? " (finite track, exact)" : "") << '\n'
      << "infinitesimal weights: " << d.Yp.size() << " edges, total " << num(sum) << '\n'
      << "tail_bound: " << num(d.tail_bound) << '\n'
      << "switch_residual: " << num(d.switch_residual) << '\n';
}

void cmd_outside(const Options& op, std::ostream& o) {
    const BinarySeq s = parse_seq(op.seq);
    OutsideOrbit orb = outside_orbit(s);
    if (op.steps && *op.steps < 0) throw DomainError("negative step count");
    // Extend or trim the tabulated orbit to the requested length.
    std::vector<std::pair<OutsidePoint, bool>> rows;
    for (const auto& x : orb.steps) rows.push_back({x, false});
    const int want = op.steps ? *op.steps : orb.n;
    rows.resize(std::min(rows.size(), static_cast<std::size_t>(want) + 1));
    while (static_cast<int>(rows.size()) <= want && !rows.back().second) {
        OutsideStepResult r = outside_step(rows.back().first, s);
        rows.push_back({r.point, r.inside});
    }
    if (op.json) {
        Json j = outside_json(orb);
        Json table = Json::array();
        for (std::size_t i = 0; i < rows.size(); ++i)
            table.push_back({{"step", i}, {"point", point_str(rows[i].first)}, {"inside", rows[i].second}});
        j["table"] = table;
        o << j.dump(2) << '\n';
        return;
    }
    o << "step  point\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        o << std::setw(4) << i << "  " << (rows[i].second ? "inside " + rows[i].first.itinerary.str() : point_str(rows[i].first))
          << '\n';
    o << "escape time: " << orb.n << '\n' << "case: " << case_name(orb.kase) << '\n' << "Lambda orbit:";
    for (const auto& x : orb.lambda_orbit) o << ' ' << point_str(x);
    o << '\n' << "rotation number: " << orb.rotation.str() << '\n';
    if (!orb.extras.empty()) {
        o << "backward tree:";
        for (const auto& x : orb.extras) o << ' ' << point_str(x);
        o << '\n';
    }
}

void cmd_census(const Options& op, std::ostream& o) {
    const Pipeline p = run_pipeline(parse_seq(op.seq), op.depth, op.tol);
    const RectangleComplex cx = complex_of(p);
    const SingularityCensus c = singularity_census(cx, p.track);
    if (op.json) {
        o << census_json(c).dump(2) << '\n';
        return;
    }
    o << "case: " << horizontal_case_name(cx.hcase) << '\n'
      << "one-prongs listed: " << c.one_prong_orbit.size() << '\n'
      << "single orbit: " << (c.single_orbit ? "yes" : "no") << '\n'
      << "finite: " << (c.finite ? "yes" : "no") << '\n'
      << "asymptotics: " << asymptotics_name(c.asymptotics) << '\n'
      << "three-prongs: " << c.three_prongs << '\n';
    o << "orbit:";
    for (const auto& x : c.one_prong_orbit) {
        if (x.vertical) o << " v" << x.edge << "@J" << x.junction;
        else o << " h" << x.level;
    }
    o << '\n';
    for (const auto& sp : c.special_points)
        o << "special: " << sp.kind << " at " << sp.location << (sp.prongs ? " prongs " + std::to_string(sp.prongs) : "")
          << '\n';
    for (const auto& n : c.notes) o << "note: " << n << '\n';
}

ComplexPoint parse_point(const std::string& text) {
    std::istringstream in(text);
    ComplexPoint p;
    char c1 = 0, c2 = 0;
    if (!(in >> p.strip >> c1 >> p.x >> c2 >> p.y) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof())
        throw DomainError("point must be strip,x,y: " + text);
    return p;
}

void emit_points(const Options& op, std::ostream& o, const std::vector<ComplexPoint>& pts) {
    if (op.csv) o << points_csv(pts);
    else if (op.json) o << points_json(pts).dump(2) << '\n';
    else
        for (std::size_t i = 0; i < pts.size(); ++i)
            o << std::setw(4) << i << "  strip " << pts[i].strip << "  x " << num(pts[i].x, 15) << "  y "
              << num(pts[i].y, 15) << '\n';
}

void cmd_iterate(const Options& op, std::ostream& o) {
    const Pipeline p = run_pipeline(parse_seq(op.seq), op.depth, op.tol);
    const RectangleComplex cx = complex_of(p);
    const ComplexPoint start = parse_point(op.point);
    if (start.strip < 1 || start.strip > cx.N - 1) throw DomainError("strip out of range: " + std::to_string(start.strip));
    try {
        emit_points(op, o, iterate(cx, start, op.steps.value_or(10)));
    } catch (const OrbitEscape& e) {
        emit_points(op, o, e.partial);
        throw;
    }
}

void cmd_moduli(const Options& op, std::ostream& o) {
    const Pipeline p = run_pipeline(parse_seq(op.seq), op.depth, op.tol);
    const RectangleComplex cx = complex_of(p);
    const ModuliReport m = moduli_bounds(cx, p.track, op.count, op.target);
    if (op.json) {
        o << moduli_json(m).dump(2) << '\n';
        return;
    }
    o << "case: " << horizontal_case_name(m.hcase) << '\n';
    if (m.hcase == HorizontalCase::endpoint) {
        o << "w: " << num(m.w) << "  W: " << num(m.W) << '\n'
          << "C1: " << num(m.C1) << "  C2: " << num(m.C2) << "  C3: " << num(m.C3) << '\n'
          << "k  bound  partial_sum\n";
        for (const auto& e : m.endpoint) o << e.k << "  " << num(e.bound) << "  " << num(e.partial_sum) << '\n';
        o << "partial sum exceeds " << num(m.target) << " at k = "
          << (m.target_k ? std::to_string(*m.target_k) : std::string("not reached")) << '\n';
    }
    if (m.hcase == HorizontalCase::generic) {
        o << "junction  config  mu  w  c  C  bound  max_k_deviation\n";
        for (const auto& j : m.junctions)
            o << j.junction << "  " << j.config << "  " << num(j.mu) << "  " << num(j.w) << "  " << num(j.c) << "  "
              << num(j.C) << "  " << num(j.bound) << "  " << num(j.max_k_deviation, 3) << '\n';
    }
    for (const auto& n : m.notes) o << "note: " << n << '\n';
}

void cmd_render(const Options& op, std::ostream& o) {
    const Pipeline p = run_pipeline(parse_seq(op.seq), op.depth, op.tol);
    o << render_svg(complex_of(p));
}

struct SweepRow {
    std::string word;
    std::string seq;
    std::optional<Rational> q;  // unset when no height exists
    std::string cls;
    std::optional<double> lambda;
    std::string status = "ok";
};

SweepRow sweep_row(const Word& w) {
    SweepRow r;
    r.word = to_string(w);
    const BinarySeq s = periodic_seq(w);
    r.seq = s.str();
    try {
        const KneadingClass cls = classify(s);
        r.q = cls.q;
        r.cls = tag_name(cls.tag);
        const StripCover cov = strip_cover(critical_orbit(s));
        if (!mia_check(cov)) {
            r.status = "not_mia";
            return r;
        }
        r.lambda = perron(cov).lambda;
    } catch (const DomainError& e) {
        r.status = std::string("rejected: ") + e.what();
    }
    return r;
}

void cmd_sweep(const Options& op, std::ostream& o) {
    if (op.max_period < 1 || op.max_period > 24) throw DomainError("max period must lie in [1, 24]");
    const std::vector<Word> words = maximal_words(static_cast<std::size_t>(op.max_period));
    std::vector<SweepRow> rows(words.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < words.size();) {
            try {
                rows[i] = sweep_row(words[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned n = op.threads > 0 ? static_cast<unsigned>(op.threads) : std::max(1U, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(words.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.q.has_value() != b.q.has_value()) return a.q.has_value();
        if (a.q && *a.q != *b.q) return *a.q < *b.q;
        if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
        return a.word < b.word;
    });
    if (op.json) {
        Json a = Json::array();
        for (const auto& r : rows)
            a.push_back({{"s", r.seq},
                         {"q", r.q ? Json(r.q->str()) : Json(nullptr)},
                         {"class", r.cls},
                         {"lambda", r.lambda ? Json(*r.lambda) : Json(nullptr)},
                         {"status", r.status}});
        o << a.dump(2) << '\n';
        return;
    }
    const char sep = op.csv ? ',' : '\t';
    o << "s" << sep << "q" << sep << "class" << sep << "lambda" << sep << "status\n";
    for (const auto& r : rows)
        o << r.seq << sep << (r.q ? r.q->str() : "-") << sep << (r.cls.empty() ? "-" : r.cls) << sep << (r.lambda ? fixed(*r.lambda) : "-") << sep
          << (op.csv && r.status.find(',') != std::string::npos ? '"' + r.status + '"' : r.status) << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kneading sequences, invariant train tracks and generalized pseudo-Anosov data", "gpa"};
    app.require_subcommand(1, 1);
    Options op;
    auto add_seq = [&](CLI::App* c) { c->add_option("seq", op.seq, "kneading sequence, e.g. \"(1001011)\"")->required(); };
    auto add_json = [&](CLI::App* c) { c->add_flag("--json", op.json, "structured output"); };
    auto add_depth = [&](CLI::App* c) {
        c->add_option("--depth", op.depth, "truncation depth (default: GPA_DEPTH, then lambda^-d < 1e-12)");
    };
    auto add_out = [&](CLI::App* c) { c->add_option("-o,--output", op.output, "write to this file atomically"); };

    auto* word = app.add_subcommand("word", "words attached to a height m/n");
    word->add_option("q", op.rational, "rational m/n in (0, 1/2)")->required();
    add_json(word);
    add_out(word);
    auto* height_cmd = app.add_subcommand("height", "height of a kneading sequence");
    add_seq(height_cmd);
    add_json(height_cmd);
    add_out(height_cmd);
    auto* classify_cmd = app.add_subcommand("classify", "position within its height interval");
    add_seq(classify_cmd);
    add_json(classify_cmd);
    add_out(classify_cmd);
    auto* orbit = app.add_subcommand("orbit", "critical orbit and transition matrix");
    add_seq(orbit);
    add_json(orbit);
    add_out(orbit);
    auto* track = app.add_subcommand("track", "invariant generalized train track");
    add_seq(track);
    add_depth(track);
    auto* fmt = track->add_option_group("format");
    fmt->add_flag("--describe", op.describe_only, "print the junction description only");
    fmt->add_flag("--json", op.json, "structured output");
    fmt->require_option(0, 1);
    add_out(track);
    auto* spectrum = app.add_subcommand("spectrum", "dilatation and eigenvectors");
    add_seq(spectrum);
    spectrum->add_option("--tol", op.tol, "power iteration tolerance");
    add_depth(spectrum);
    add_json(spectrum);
    add_out(spectrum);
    auto* outside = app.add_subcommand("outside", "orbit of a_hat under the outside map");
    add_seq(outside);
    outside->add_option("--steps", op.steps, "number of steps tabulated (default: escape time)");
    add_json(outside);
    add_out(outside);
    auto* census = app.add_subcommand("census", "singularity census");
    add_seq(census);
    add_depth(census);
    add_json(census);
    add_out(census);
    auto* iterate_cmd = app.add_subcommand("iterate", "iterate a point of the rectangle complex");
    add_seq(iterate_cmd);
    iterate_cmd->add_option("--point", op.point, "strip,x,y in rectangle coordinates")->required();
    iterate_cmd->add_option("--steps", op.steps, "number of steps (default 10)");
    add_depth(iterate_cmd);
    iterate_cmd->add_flag("--csv", op.csv, "CSV output with columns strip,x,y");
    add_json(iterate_cmd);
    add_out(iterate_cmd);
    auto* moduli = app.add_subcommand("moduli", "annulus modulus lower bounds");
    add_seq(moduli);
    moduli->add_option("--count", op.count, "number of bounds listed");
    moduli->add_option("--target", op.target, "partial-sum threshold");
    add_depth(moduli);
    add_json(moduli);
    add_out(moduli);
    auto* render = app.add_subcommand("render", "SVG of the rectangle complex");
    add_seq(render);
    add_depth(render);
    add_out(render);
    auto* sweep = app.add_subcommand("sweep", "q, lambda and class for all maximal words");
    sweep->add_option("--max-period", op.max_period, "longest word length");
    sweep->add_option("--threads", op.threads, "worker threads (default: hardware)");
    sweep->add_flag("--csv", op.csv, "CSV output");
    add_json(sweep);
    add_out(sweep);

    std::vector<const char*> argv{"gpa"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitDomain;
    }

    std::ostringstream buf;
    int code = kExitOk;
    try {
        CLI::App* sub = app.get_subcommands().front();
        const std::string verb = sub->get_name();
        if (verb == "word") cmd_word(op, buf);
        else if (verb == "height") cmd_height(op, buf);
        else if (verb == "classify") cmd_classify(op, buf);
        else if (verb == "orbit") cmd_orbit(op, buf);
        else if (verb == "track") cmd_track(op, buf);
        else if (verb == "spectrum") cmd_spectrum(op, buf);
        else if (verb == "outside") cmd_outside(op, buf);
        else if (verb == "census") cmd_census(op, buf);
        else if (verb == "iterate") cmd_iterate(op, buf);
        else if (verb == "moduli") cmd_moduli(op, buf);
        else if (verb == "render") cmd_render(op, buf);
        else if (verb == "sweep") cmd_sweep(op, buf);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        code = kExitDomain;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << '\n';
        code = kExitInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        code = kExitInternal;
    }
    if (code == kExitInternal) return code;
    // Partial output (an escaped orbit) is still delivered.
    try {
        if (op.output.empty()) out << buf.str();
        else if (!buf.str().empty()) atomic_write(op.output, buf.str());
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return code;
}

}  // namespace gpa
