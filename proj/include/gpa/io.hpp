#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpa/geometry.hpp"
#include "gpa/height.hpp"
#include "gpa/orbit.hpp"
#include "gpa/outside.hpp"
#include "gpa/spectral.hpp"
#include "gpa/traintrack.hpp"

namespace gpa {

using Json = nlohmann::ordered_json;

Json words_json(const HeightWords& hw);
// {q, tag, words}; words are omitted at height zero.
Json class_json(const BinarySeq& s, const KneadingClass& cls);
Json orbit_json(const CriticalOrbit& orbit, const StripCover& cover);
Json track_json(const TrainTrack& track);
Json spectrum_json(const SpectralData& d);
Json outside_json(const OutsideOrbit& o);
Json census_json(const SingularityCensus& c);
Json moduli_json(const ModuliReport& m);
Json points_json(const std::vector<ComplexPoint>& pts);

// Inverse of track_json. The orbit is rebuilt from the stored sequence.
TrainTrack track_from_json(const Json& j);
TrackDescription description_from_json(const Json& j);
// Y and Yp from spectrum_json output.
std::vector<double> heights_from_json(const Json& j);
std::map<int, double> inf_heights_from_json(const Json& j);

std::string points_csv(const std::vector<ComplexPoint>& pts);

// Writes to a temporary file in the target directory, then renames it into place.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace gpa
