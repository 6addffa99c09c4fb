// lipsquash: command line front end for the squashing constructions and experiments.

#include "lipsquash/compose.hpp"
#include "lipsquash/content.hpp"
#include "lipsquash/fragments.hpp"
#include "lipsquash/io.hpp"
#include "lipsquash/planar.hpp"
#include "lipsquash/realline.hpp"
#include "lipsquash/stability.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace lipsquash;

namespace {

void emit(const std::string& text, const std::string& out)
{
    if (out.empty() || out == "-")
        std::cout << text;
    else
        io::write_file(out, text);
}

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    return v;
}

// "lo0,lo1,...:hi0,hi1,..."
Box parse_box(const std::string& s)
{
    auto colon = s.find(':');
    if (colon == std::string::npos) throw InputError("box must be lo:hi, got " + s);
    auto lo = parse_list(s.substr(0, colon));
    auto hi = parse_list(s.substr(colon + 1));
    if (lo.size() != hi.size() || lo.empty()) throw InputError("box corners of different dimension: " + s);
    Box b{Vec(lo.size()), Vec(hi.size())};
    for (std::size_t i = 0; i < lo.size(); ++i) {
        b.lo[i] = lo[i];
        b.hi[i] = hi[i];
    }
    return b;
}

std::vector<double> parse_grid(const std::string& s)
{
    // "a:b:step" or a comma list.
    if (s.find(':') == std::string::npos) return parse_list(s);
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ':')) parts.push_back(std::stod(cell));
    if (parts.size() != 3 || !(parts[2] > 0.0)) throw InputError("grid must be a:b:step with step > 0");
    std::vector<double> v;
    for (int k = 0;; ++k) {
        double x = parts[0] + k * parts[2];
        if (x > parts[1] + 1e-12) break;
        v.push_back(x);
    }
    return v;
}

FractalFixture make_fixture(const std::string& name, int gen)
{
    if (name == "four_corner") return four_corner(gen);
    if (name == "koch") return koch(gen);
    throw InputError("unknown fixture " + name + " (four_corner, koch)");
}

std::vector<Vec> cell_polyline(const std::vector<Vec>& cell)
{
    std::vector<Vec> pl = cell;
    pl.push_back(cell.front());
    return pl;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Lipschitz squashing toolkit"};
    app.require_subcommand(1);

    // squash-line
    auto* line = app.add_subcommand("squash-line", "Build a real-line squashing map for a measure");
    std::string line_measure, line_out;
    int line_uniform = 0;
    double line_eta = 0.1, line_eps = 0.01, line_r = 0.05, line_D = 0.0;
    line->add_option("--measure", line_measure, "Measure file (.json or .csv) on the line");
    line->add_option("--uniform", line_uniform, "Use n uniform atoms on [-1,1] instead");
    line->add_option("--eta", line_eta, "Mass budget");
    line->add_option("--eps", line_eps, "Sup distance from the identity");
    line->add_option("--r", line_r, "Scale separating the Lipschitz regimes");
    line->add_option("--D", line_D, "Half width of the domain (default: support radius)");
    line->add_option("-o,--out", line_out, "Output JSON file");

    // content
    auto* content = app.add_subcommand("content", "Hausdorff content profile of a point set");
    std::string content_measure, content_fixture, content_leaves = "point", content_grid = "0:2:0.05", content_out;
    int content_gen = 4;
    content->add_option("--measure", content_measure, "Point set file (weights ignored)");
    content->add_option("--fixture", content_fixture, "four_corner or koch");
    content->add_option("--gen", content_gen, "Fixture generation");
    content->add_option("--leaves", content_leaves, "point, cell or chain")->check(CLI::IsMember({"point", "cell", "chain"}));
    content->add_option("--s-grid", content_grid, "Exponents, a:b:step or a comma list");
    content->add_option("-o,--out", content_out, "Output CSV file");

    // squash-plane
    auto* plane = app.add_subcommand("squash-plane", "Planar squashing of a fractal fixture");
    std::string plane_fixture = "four_corner", plane_eps = "0.5,0.25,0.125", plane_out, plane_svg;
    int plane_gen = 5;
    plane->add_option("--fixture", plane_fixture, "four_corner or koch");
    plane->add_option("--gen", plane_gen, "Fixture generation");
    plane->add_option("--eps", plane_eps, "Decreasing comma list of eps");
    plane->add_option("-o,--out", plane_out, "Output JSON file");
    plane->add_option("--svg", plane_svg, "Draw the fixture and its image at the last eps");

    // fragments
    auto* frag = app.add_subcommand("fragments", "Curve fragment families");
    frag->require_subcommand(1);
    auto* bary = frag->add_subcommand("barycenter", "Barycenter mass of a family");
    std::string bary_file;
    std::vector<std::string> bary_boxes;
    bary->add_option("--fragments", bary_file, "Fragment JSON")->required();
    bary->add_option("--box", bary_boxes, "Region box lo:hi in X (repeatable); default all of X");
    auto* restr = frag->add_subcommand("restrict", "Slice a family by boxes in X x [0,1]");
    std::string restr_file, restr_out;
    std::vector<std::string> restr_boxes;
    restr->add_option("--fragments", restr_file, "Fragment JSON")->required();
    restr->add_option("--box", restr_boxes, "Box lo:hi in X x [0,1], time last (repeatable)")->required();
    restr->add_option("-o,--out", restr_out, "Output fragment JSON");
    auto* fcheck = frag->add_subcommand("check", "Check that a measure is dominated by the barycenter");
    std::string check_file, check_measure;
    double check_gran = 0.01;
    fcheck->add_option("--fragments", check_file, "Fragment JSON")->required();
    fcheck->add_option("--measure", check_measure, "Measure file")->required();
    fcheck->add_option("--granularity", check_gran, "Resolution of the check");

    // stability
    auto* stab = app.add_subcommand("stability", "Derivative stability sweeps and the sawtooth demo");
    std::string stab_curve = "circle", stab_perturb = "radial", stab_demo, stab_teeth = "4,16,64", stab_out, stab_svg;
    double stab_delta = 0.1, stab_eps0 = 0.5;
    int stab_sweep = 8, stab_samples = 4001;
    stab->add_option("--curve", stab_curve, "circle or segment")->check(CLI::IsMember({"circle", "segment"}));
    stab->add_option("--perturb", stab_perturb, "radial or polygon")->check(CLI::IsMember({"radial", "polygon"}));
    stab->add_option("--delta", stab_delta, "Deviation threshold");
    stab->add_option("--sweep", stab_sweep, "Number of halvings of eps");
    stab->add_option("--eps0", stab_eps0, "First eps of the sweep");
    stab->add_option("--samples", stab_samples, "Curve samples");
    stab->add_option("--demo", stab_demo, "sawtooth")->check(CLI::IsMember({"sawtooth"}));
    stab->add_option("--teeth", stab_teeth, "Comma list of tooth counts for the demo");
    stab->add_option("-o,--out", stab_out, "Output CSV file");
    stab->add_option("--svg", stab_svg, "Draw the demo curves");

    // compose
    auto* comp = app.add_subcommand("compose", "Composed squashing against projection oracles");
    std::string comp_fixture = "four_corner", comp_mode = "product", comp_out;
    int comp_gen = 5, comp_grid = 33;
    double comp_eta = 0.1, comp_eps = 0.02, comp_delta = 0.5, comp_theta = -1.0;
    comp->add_option("--fixture", comp_fixture, "four_corner or koch");
    comp->add_option("--gen", comp_gen, "Fixture generation");
    comp->add_option("--eta", comp_eta, "Mass budget");
    comp->add_option("--eps", comp_eps, "Sup distance per coordinate");
    comp->add_option("--delta", comp_delta, "Lipschitz slack");
    comp->add_option("--theta", comp_theta, "Oracle cone width (default: from the budget)");
    comp->add_option("--grid", comp_grid, "Verification grid points per axis");
    comp->add_option("--mode", comp_mode, "product or recombine")->check(CLI::IsMember({"product", "recombine"}));
    comp->add_option("-o,--out", comp_out, "Output JSON file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*line) {
            DiscreteMeasure mu;
            if (!line_measure.empty()) {
                mu = io::read_measure(line_measure).normalized();
            } else {
                if (line_uniform < 1) throw InputError("give --measure or --uniform n");
                std::vector<double> pts(line_uniform);
                for (int i = 0; i < line_uniform; ++i)
                    pts[i] = line_uniform == 1 ? 0.0 : -1.0 + 2.0 * i / (line_uniform - 1);
                mu = DiscreteMeasure::on_line(pts, std::vector<double>(line_uniform, 1.0 / line_uniform));
            }
            double D = line_D;
            if (D <= 0.0)
                for (double t : mu.line_points()) D = std::max(D, std::abs(t));
            D = std::max(D, 1e-9);
            auto h = build_h(mu, line_eta, line_r, line_eps, D);
            emit(io::squash_line_json(h, mu) + "\n", line_out);
        } else if (*content) {
            std::vector<Vec> pts;
            std::vector<Box> leaves;
            if (!content_measure.empty()) {
                pts = io::read_measure(content_measure).points();
            } else if (!content_fixture.empty()) {
                pts = make_fixture(content_fixture, content_gen).points;
            } else {
                throw InputError("give --measure or --fixture");
            }
            if (content_leaves == "point") {
                leaves = point_leaves(pts);
            } else if (content_leaves == "chain") {
                leaves = chain_leaves(pts);
            } else {
                if (content_fixture.empty()) throw InputError("cell leaves need a fixture");
                leaves = cell_leaves(pts, make_fixture(content_fixture, content_gen).cell_side);
            }
            auto prof = dimension_profile(leaves, parse_grid(content_grid));
            std::ostringstream os;
            io::write_profile_csv(os, prof);
            emit(os.str(), content_out);
            std::cerr << "proxy dimension: " << (prof.proxy ? std::to_string(*prof.proxy) : "none") << " bracket ["
                      << prof.bracket_lo << ", " << prof.bracket_hi << "]\n";
        } else if (*plane) {
            auto fix = make_fixture(plane_fixture, plane_gen);
            auto eps = parse_list(plane_eps);
            auto rows = squash_report(fix, eps);
            emit(io::squash_plane_json(fix, rows) + "\n", plane_out);
            if (!plane_svg.empty()) {
                auto res = build_planar_squash(fix, eps.back());
                io::SvgLayer cells{{}, {}, "#888888"};
                for (const auto& c : fix.cells(fix.generation)) cells.polylines.push_back(cell_polyline(c));
                io::SvgLayer img{{}, res.image, "#c03030"};
                io::write_file(plane_svg, io::svg({cells, img}));
            }
        } else if (*frag) {
            if (*bary) {
                auto eta = io::read_fragments(bary_file);
                Region region;
                if (!bary_boxes.empty()) {
                    region.emplace();
                    for (const auto& b : bary_boxes) region->push_back(parse_box(b));
                }
                std::cout << barycenter_mass(eta, region) << '\n';
            } else if (*restr) {
                auto eta = io::read_fragments(restr_file);
                std::vector<Box> K;
                for (const auto& b : restr_boxes) K.push_back(parse_box(b));
                auto r = slice_restriction(eta, K);
                auto m = restriction_mass_identity(eta, r.op);
                std::cerr << "mass identity: lhs " << m.lhs << " rhs " << m.rhs << '\n';
                emit(io::fragments_to_json(r.family) + "\n", restr_out);
            } else if (*fcheck) {
                auto eta = io::read_fragments(check_file);
                auto mu = io::read_measure(check_measure);
                auto v = alberti_check(mu, eta, check_gran);
                if (v.dominated) {
                    std::cout << "dominated\n";
                } else {
                    const Vec& p = mu.point(*v.witness);
                    std::cout << "violation at atom " << *v.witness << " (";
                    for (Eigen::Index k = 0; k < p.size(); ++k) std::cout << (k ? ", " : "") << p[k];
                    std::cout << "), distance " << v.witness_distance << '\n';
                    return 1;
                }
            }
        } else if (*stab) {
            std::ostringstream os;
            if (stab_demo == "sawtooth") {
                auto teeth = parse_list(stab_teeth);
                std::vector<double> params;
                std::vector<StabilityReport> rows;
                io::SvgLayer base{{}, {}, "#888888"}, saw{{}, {}, "#c03030"};
                for (double n : teeth) {
                    auto row = sawtooth_demo(static_cast<int>(n), 0.5);
                    params.push_back(n);
                    rows.push_back({0.5, row.sup_dev, row.deviation_fraction, row.bound_holds, false, 1.0});
                    auto c = sawtooth_base(static_cast<int>(n));
                    auto f = sawtooth_map(static_cast<int>(n));
                    std::vector<Vec> pl;
                    for (const auto& x : c.x) pl.push_back(f(x) + vec2(0.0, 0.6 * (saw.polylines.size() + 1) / teeth.size()));
                    saw.polylines.push_back(pl);
                    if (base.polylines.empty()) base.polylines.push_back(c.x);
                }
                io::write_stability_csv(os, "teeth", params, rows);
                if (!stab_svg.empty()) io::write_file(stab_svg, io::svg({base, saw}));
            } else {
                SampledCurve gamma = stab_curve == "circle"
                                         ? SampledCurve::circle_arc(1.0, 0.0, std::numbers::pi, stab_samples)
                                         : SampledCurve::segment(vec2(0.0, 0.0), vec2(1.0, 0.0), stab_samples);
                PerturbationFamily family = stab_perturb == "radial" ? radial_family(Vec::Zero(2), 1.0)
                                                                     : polygon_family(Vec::Zero(2), 1.0);
                auto sweep = stability_sweep(gamma, family, stab_delta, stab_eps0, stab_sweep);
                std::vector<double> params;
                double e = stab_eps0;
                for (int j = 0; j < stab_sweep; ++j, e *= 0.5) params.push_back(e);
                io::write_stability_csv(os, "eps", params, sweep.rows);
                if (auto f = sweep.found_eps())
                    std::cerr << "bound holds from eps = " << *f << '\n';
                else
                    std::cerr << "bound never holds in the sweep\n";
            }
            emit(os.str(), stab_out);
        } else if (*comp) {
            auto fix = make_fixture(comp_fixture, comp_gen);
            FixtureComposeParams p{comp_eta, comp_eps, comp_delta, comp_theta, comp_grid};
            auto res = compose_fixture(fix, comp_mode == "product" ? ComposeMode::Product : ComposeMode::Recombine, p);
            emit(io::compose_json(fix, res, comp_eps) + "\n", comp_out);
        }
    } catch (const ContractViolation& e) {
        std::cerr << "lipsquash: contract violation: " << e.what() << '\n';
        return 4;
    } catch (const InputError& e) {
        std::cerr << "lipsquash: input error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "lipsquash: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
