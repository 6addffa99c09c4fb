#pragma once

#include "lipsquash/compose.hpp"
#include "lipsquash/content.hpp"
#include "lipsquash/fragments.hpp"
#include "lipsquash/measure.hpp"
#include "lipsquash/planar.hpp"
#include "lipsquash/realline.hpp"
#include "lipsquash/stability.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lipsquash::io {

// {"dim": d, "points": [[...], ...], "weights": [...]}; weights default to uniform.
DiscreteMeasure measure_from_json(const std::string& text);
std::string measure_to_json(const DiscreteMeasure& mu);
// One atom per row, coordinates then weight; a non-numeric first row is a header.
DiscreteMeasure measure_from_csv(const std::string& text);
// Dispatches on the extension, .json or .csv.
DiscreteMeasure read_measure(const std::string& path);

// {"fragments": [{"intervals": [[a,b],...], "points": [[...],...], "L": v, "counts": [..]}], "weights": [...]}
// Points are listed interval by interval; "counts" gives the number per interval and may be
// omitted for a single interval. Knots are uniform on each interval.
FragmentFamily fragments_from_json(const std::string& text);
std::string fragments_to_json(const FragmentFamily& eta);
FragmentFamily read_fragments(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

std::string squash_line_json(const SquashResult& h, const DiscreteMeasure& mu);
std::string squash_plane_json(const FractalFixture& fix, const std::vector<SquashReportRow>& rows);
std::string compose_json(const FractalFixture& fix, const FixtureCompose& c, double eps);

void write_profile_csv(std::ostream& os, const DimensionProfile& p);
void write_stability_csv(std::ostream& os, const std::string& param_name, const std::vector<double>& params,
                         const std::vector<StabilityReport>& rows);

struct SvgLayer {
    std::vector<std::vector<Vec>> polylines;
    std::vector<Vec> points;
    std::string stroke = "black";
};

// Planar layers scaled to fit a square canvas, y axis pointing up.
std::string svg(const std::vector<SvgLayer>& layers, int size = 512);

}  // namespace lipsquash::io
