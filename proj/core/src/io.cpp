#include "lipsquash/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lipsquash::io {

using nlohmann::json;

namespace {

Vec to_vec(const json& j)
{
    if (!j.is_array()) throw InputError("point must be an array of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw InputError("point coordinates must be numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

json from_vec(const Vec& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json parse(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

DiscreteMeasure measure_from_json(const std::string& text)
{
    json j = parse(text);
    if (!j.is_object() || !j.contains("points")) throw InputError("measure JSON needs a \"points\" array");
    const json& pts = j["points"];
    if (!pts.is_array() || pts.empty()) throw InputError("measure needs at least one point");
    std::vector<Vec> points;
    for (const auto& p : pts) points.push_back(p.is_number() ? vec1(p.get<double>()) : to_vec(p));
    int dim = j.contains("dim") ? j["dim"].get<int>() : static_cast<int>(points.front().size());
    for (const auto& p : points)
        if (p.size() != dim) throw InputError("point dimension does not match \"dim\"");
    std::vector<double> w;
    if (j.contains("weights")) {
        for (const auto& x : j["weights"]) w.push_back(x.get<double>());
    } else {
        w.assign(points.size(), 1.0 / static_cast<double>(points.size()));
    }
    return DiscreteMeasure(dim, points, w);
}

std::string measure_to_json(const DiscreteMeasure& mu)
{
    json j;
    j["dim"] = mu.dim();
    j["points"] = json::array();
    for (const auto& p : mu.points()) j["points"].push_back(from_vec(p));
    j["weights"] = mu.weights();
    return j.dump(2);
}

DiscreteMeasure measure_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::vector<Vec> points;
    std::vector<double> weights;
    bool first = true;
    int dim = -1;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;
            }
            throw InputError("non-numeric CSV row: " + line);
        }
        first = false;
        if (row.size() < 2) throw InputError("CSV rows need coordinates and a weight");
        if (dim < 0) dim = static_cast<int>(row.size()) - 1;
        if (static_cast<int>(row.size()) - 1 != dim) throw InputError("CSV rows of different widths");
        Vec p(dim);
        for (int k = 0; k < dim; ++k) p[k] = row[k];
        points.push_back(p);
        weights.push_back(row.back());
    }
    if (points.empty()) throw InputError("CSV measure has no rows");
    return DiscreteMeasure(dim, points, weights);
}

DiscreteMeasure read_measure(const std::string& path)
{
    std::string text = read_file(path);
    if (ends_with(path, ".csv")) return measure_from_csv(text);
    return measure_from_json(text);
}

FragmentFamily fragments_from_json(const std::string& text)
{
    json j = parse(text);
    if (!j.is_object() || !j.contains("fragments")) throw InputError("fragment JSON needs a \"fragments\" array");
    const json& frs = j["fragments"];
    FragmentFamily eta;
    std::vector<double> weights;
    if (j.contains("weights"))
        for (const auto& w : j["weights"]) weights.push_back(w.get<double>());
    else
        weights.assign(frs.size(), frs.empty() ? 0.0 : 1.0 / static_cast<double>(frs.size()));
    if (weights.size() != frs.size()) throw InputError("one weight per fragment is required");

    for (std::size_t i = 0; i < frs.size(); ++i) {
        const json& f = frs[i];
        if (!f.contains("intervals") || !f.contains("points")) throw InputError("fragment needs intervals and points");
        std::vector<Interval> dom;
        for (const auto& iv : f["intervals"]) {
            if (!iv.is_array() || iv.size() != 2) throw InputError("intervals are [a, b] pairs");
            dom.push_back({iv[0].get<double>(), iv[1].get<double>()});
        }
        std::vector<Vec> pts;
        for (const auto& p : f["points"]) pts.push_back(to_vec(p));
        std::vector<std::size_t> counts;
        if (f.contains("counts")) {
            for (const auto& c : f["counts"]) counts.push_back(c.get<std::size_t>());
        } else if (dom.size() == 1) {
            counts.push_back(pts.size());
        } else {
            throw InputError("fragments with several intervals need \"counts\"");
        }
        if (counts.size() != dom.size()) throw InputError("one count per interval is required");
        std::size_t total = 0;
        for (auto c : counts) total += c;
        if (total != pts.size()) throw InputError("counts do not add up to the number of points");
        double L = f.contains("L") ? f["L"].get<double>() : 0.0;

        if (f.contains("knots")) {
            std::vector<double> knots;
            for (const auto& k : f["knots"]) knots.push_back(k.get<double>());
            if (knots.size() != pts.size()) throw InputError("one knot per point is required");
            std::vector<FragmentPiece> pieces;
            std::size_t at = 0;
            for (std::size_t k = 0; k < dom.size(); ++k) {
                FragmentPiece p;
                p.knots.assign(knots.begin() + at, knots.begin() + at + counts[k]);
                p.values.assign(pts.begin() + at, pts.begin() + at + counts[k]);
                if (p.knots.empty() || p.knots.front() != dom[k].a || p.knots.back() != dom[k].b)
                    throw InputError("knots must start and end at the interval ends");
                at += counts[k];
                pieces.push_back(std::move(p));
            }
            eta.add(CurveFragment(std::move(pieces), L), weights[i]);
        } else {
            std::vector<std::vector<Vec>> values;
            std::size_t at = 0;
            for (auto c : counts) {
                values.emplace_back(pts.begin() + at, pts.begin() + at + c);
                at += c;
            }
            eta.add(CurveFragment::uniform(dom, values, L), weights[i]);
        }
    }
    eta.alberti_candidate = j.value("alberti_candidate", false);
    eta.validate();
    return eta;
}

std::string fragments_to_json(const FragmentFamily& eta)
{
    json j;
    j["fragments"] = json::array();
    for (const auto& f : eta.fragments) {
        json o;
        o["intervals"] = json::array();
        o["points"] = json::array();
        o["knots"] = json::array();
        o["counts"] = json::array();
        for (const auto& p : f.pieces()) {
            o["intervals"].push_back({p.knots.front(), p.knots.back()});
            o["counts"].push_back(p.knots.size());
            for (std::size_t k = 0; k < p.knots.size(); ++k) {
                o["knots"].push_back(p.knots[k]);
                o["points"].push_back(from_vec(p.values[k]));
            }
        }
        o["L"] = f.lipschitz_bound();
        j["fragments"].push_back(o);
    }
    j["weights"] = eta.weights;
    if (eta.alberti_candidate) j["alberti_candidate"] = true;
    return j.dump(2);
}

FragmentFamily read_fragments(const std::string& path)
{
    return fragments_from_json(read_file(path));
}

std::string squash_line_json(const SquashResult& h, const DiscreteMeasure& mu)
{
    const auto& c = h.checks;
    json j;
    j["N"] = h.profile.N();
    j["R"] = h.profile.R();
    j["t0"] = h.profile.t0();
    j["lambda"] = h.profile.lambda();
    j["E_mass"] = h.E_mass(mu);
    j["image_points"] = h.concentrated_image;
    j["degenerate"] = h.degenerate;
    j["checks"] = {
        {"sup_deviation", c.sup_deviation}, {"sup_ok", c.sup_ok},
        {"max_lipschitz_ratio", c.max_lipschitz_ratio}, {"lipschitz_ok", c.lipschitz_ok},
        {"max_far_ratio", c.max_far_ratio}, {"far_ok", c.far_ok},
        {"mass_ok", c.mass_ok}, {"image_size", c.image_size},
        {"image_bound", c.image_bound}, {"image_ok", c.image_ok},
    };
    return j.dump(2);
}

std::string squash_plane_json(const FractalFixture& fix, const std::vector<SquashReportRow>& rows)
{
    json j;
    j["fixture"] = fix.name;
    j["generation"] = fix.generation;
    j["points"] = fix.points.size();
    j["rows"] = json::array();
    for (const auto& r : rows) {
        json o = {
            {"eps", r.eps}, {"generation_x", r.generation_x}, {"generation_y", r.generation_y},
            {"cover_total_x", r.cover_total_x}, {"cover_total_y", r.cover_total_y},
            {"image_count", r.image_count}, {"sup_dev", r.sup_dev},
            {"h1_content_upper", r.h1_content_upper}, {"certified", r.certified},
        };
        if (!r.flag.empty()) o["flag"] = r.flag;
        j["rows"].push_back(o);
    }
    return j.dump(2);
}

std::string compose_json(const FractalFixture& fix, const FixtureCompose& c, double eps)
{
    json j;
    j["fixture"] = fix.name;
    j["generation"] = fix.generation;
    j["points"] = fix.points.size();
    j["mode"] = c.mode == ComposeMode::Product ? "product" : "recombine";
    json row = {
        {"eps", eps},
        {"image_count", c.image.size()},
        {"sup_dev", c.sup_deviation},
        {"coordinate_sup_dev", c.coordinate_sup_deviation},
        {"E_mass", c.E_mass},
    };
    json coords = json::array();
    for (const auto& k : c.coords) {
        coords.push_back({
            {"N", k.h.profile.N()},
            {"R", k.h.profile.R()},
            {"r", k.r},
            {"E_mass", k.checks.E_mass},
            {"image_size", k.checks.image_size},
            {"oracle_ok", k.checks.oracle_ok},
            {"lipschitz_ok", k.checks.lipschitz_ok},
            {"deviation_ok", k.checks.deviation_ok},
            {"mass_ok", k.checks.mass_ok},
            {"image_ok", k.checks.image_ok},
        });
    }
    j["rows"] = json::array({row});
    j["coordinates"] = coords;
    j["checks"] = {
        {"recombined_lipschitz_ok", c.sigma.lipschitz_ok},
        {"recombined_lipschitz_ratio", c.sigma.lipschitz_ratio},
        {"recombined_lipschitz_bound", c.sigma.lipschitz_bound},
        {"containment_ok", c.sigma.containment_ok},
        {"contracts_ok", c.contracts_ok},
    };
    return j.dump(2);
}

void write_profile_csv(std::ostream& os, const DimensionProfile& p)
{
    os << "s,delta,upper,n_pieces,normalized\n";
    os << std::setprecision(17);
    for (const auto& r : p.rows)
        os << r.s << ',' << p.delta << ',' << r.upper
           << ',' << r.pieces << ',' << r.normalized << '\n';
}

void write_stability_csv(std::ostream& os, const std::string& param_name, const std::vector<double>& params,
                         const std::vector<StabilityReport>& rows)
{
    os << param_name << ",sup_dev,deviation_fraction,bound_holds\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < rows.size(); ++i)
        os << (i < params.size() ? params[i] : 0.0) << ',' << rows[i].eps << ',' << rows[i].deviation_fraction << ','
           << (rows[i].bound_holds ? "true" : "false") << '\n';
}

std::string svg(const std::vector<SvgLayer>& layers, int size)
{
    double lo_x = INFINITY, lo_y = INFINITY, hi_x = -INFINITY, hi_y = -INFINITY;
    auto see = [&](const Vec& p) {
        lo_x = std::min(lo_x, p[0]);
        hi_x = std::max(hi_x, p[0]);
        lo_y = std::min(lo_y, p[1]);
        hi_y = std::max(hi_y, p[1]);
    };
    for (const auto& l : layers) {
        for (const auto& pl : l.polylines)
            for (const auto& p : pl) see(p);
        for (const auto& p : l.points) see(p);
    }
    if (!std::isfinite(lo_x)) lo_x = lo_y = 0.0, hi_x = hi_y = 1.0;
    double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
    const double pad = 0.05 * size;
    const double scale = (size - 2.0 * pad) / span;
    auto X = [&](const Vec& p) { return pad + (p[0] - lo_x) * scale; };
    auto Y = [&](const Vec& p) { return size - pad - (p[1] - lo_y) * scale; };

    std::ostringstream os;
    os << std::setprecision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
       << size << ' ' << size << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& l : layers) {
        for (const auto& pl : l.polylines) {
            os << "<polyline fill=\"none\" stroke=\"" << l.stroke << "\" stroke-width=\"1\" points=\"";
            for (const auto& p : pl) os << X(p) << ',' << Y(p) << ' ';
            os << "\"/>\n";
        }
        for (const auto& p : l.points)
            os << "<circle cx=\"" << X(p) << "\" cy=\"" << Y(p) << "\" r=\"1.5\" fill=\"" << l.stroke << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace lipsquash::io
