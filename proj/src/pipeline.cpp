#include "gpa/pipeline.hpp"

#include <cstdlib>
#include <string>

#include "gpa/errors.hpp"

namespace gpa {

int resolve_depth(std::optional<int> requested, double lambda) {
    if (requested) {
        if (*requested < 1) throw DomainError("depth must be positive");
        return *requested;
    }
    if (const char* env = std::getenv("GPA_DEPTH"); env && *env) {
        std::size_t used = 0;
        int d = 0;
        try {
            d = std::stoi(env, &used);
        } catch (const std::exception&) {
            throw DomainError(std::string("GPA_DEPTH is not an integer: ") + env);
        }
        if (used != std::string(env).size() || d < 1) throw DomainError(std::string("bad GPA_DEPTH: ") + env);
        return d;
    }
    return default_depth(lambda);
}

Pipeline run_pipeline(const BinarySeq& s, std::optional<int> depth, double tol) {
    Pipeline p;
    p.s = s;
    p.cls = classify(s);
    p.orbit = critical_orbit(s);
    p.cover = strip_cover(p.orbit);
    p.perron = perron(p.cover, tol);
    p.depth = resolve_depth(depth, p.perron.lambda);
    p.track = grow_invariant_track(p.orbit, p.depth);
    p.track.description = describe_sequence(p.orbit, p.cls);
    p.spectral = spectral_data(p.track, p.cover, p.depth, tol);
    return p;
}

RectangleComplex complex_of(const Pipeline& p) { return build_complex(p.track, p.spectral, p.orbit, p.cls); }

}  // namespace gpa
