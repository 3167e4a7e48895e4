// topoforge command line: table dumps, model checks and state sums.

#include <topoforge/complex.hpp>
#include <topoforge/kitaev.hpp>
#include <topoforge/ribbon.hpp>
#include <topoforge/string_net.hpp>
#include <topoforge/turaev_viro.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace topoforge;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2, kBudget = 3;

struct Report {
    ordered_json j = ordered_json::object();
    bool failed = false;
    double tolerance = 1e-9;

    template <class V>
    void set(const std::string& key, const V& v) { j[key] = v; }
    // numeric result with its tolerance; exact quantities carry 0
    void value(const std::string& key, double v, double tol) {
        j[key] = v;
        j[key + "_tolerance"] = tol;
    }
    bool check(const std::string& key, double dev, double tol) {
        bool ok = dev < tol;
        value(key, dev, tol);
        j[key + "_pass"] = ok;
        failed = failed || !ok;
        return ok;
    }
    bool check_equal(const std::string& key, long got, long want) {
        bool ok = got == want;
        j[key] = got;
        j[key + "_expected"] = want;
        j[key + "_pass"] = ok;
        failed = failed || !ok;
        return ok;
    }
};

std::string number(double v) {
    if (v == 0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void print(const ordered_json& j, bool as_json) {
    if (as_json) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    for (const auto& [k, v] : j.items()) {
        std::cout << k << " = ";
        if (v.is_string()) std::cout << v.get<std::string>();
        else if (v.is_boolean()) std::cout << (v.get<bool>() ? "true" : "false");
        else if (v.is_number_float()) std::cout << number(v.get<double>());
        else std::cout << v.dump();
        std::cout << '\n';
    }
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorKind::InvalidParameter, "cannot read " + path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

HoneycombLattice parse_torus(const std::string& s) {
    int a = 0, b = 0;
    char x = 0, extra = 0;
    if (std::sscanf(s.c_str(), "%d%c%d%c", &a, &x, &b, &extra) != 3 || (x != 'x' && x != 'X'))
        fail(ErrorKind::InvalidParameter, "--torus expects LxM, got '" + s + "'");
    return honeycomb_torus(a, b);
}

std::vector<Site> parse_sites(const std::string& s) {
    std::vector<Site> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        Site site;
        char colon = 0, extra = 0;
        if (std::sscanf(item.c_str(), "%d%c%d%c", &site.plaquette, &colon, &site.vertex, &extra) != 3 || colon != ':')
            fail(ErrorKind::InvalidParameter, "site '" + item + "' is not p:v");
        out.push_back(site);
    }
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            fail(ErrorKind::InvalidParameter, "'" + item + "' is not an integer");
        }
    }
    return out;
}

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::BudgetExceeded: return kBudget;
    case ErrorKind::UnknownGroup:
    case ErrorKind::InvalidParameter:
    case ErrorKind::ParseError:
    case ErrorKind::GluingInconsistent:
    case ErrorKind::NonManifoldEdge:
    case ErrorKind::NotAPath:
    case ErrorKind::InvalidGeometry:
    case ErrorKind::NotConcatenable:
    case ErrorKind::CrossingUnsupported:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::HasBoundary:
    case ErrorKind::InadmissibleBoundary:
    case ErrorKind::StructureUnsupported: return kUsage;
    default: return kCheckFailed;
    }
}

struct Options {
    std::string group, torus = "2x2", complex, boundary, path, pair = "0,0", order, omega;
    int samples = -1, threads = 0, charge = -1, states = 100, plaquette = 0;
    std::uint64_t budget = std::uint64_t(1) << 21;
    double tolerance = 1e-9;
    bool json = false;
    bool pentagon = false, dump = false, ground_dim = false, algebra = false, randomized = false;
    bool check_duality = false, check_projector = false, string_loop = false, endpoints = false, identity = false;
    bool theta = false, compare_dw = false;
    bool tolerance_given = false;
    // checks with a stricter built-in threshold keep it unless --tolerance is passed
    double tol(double strict) const { return tolerance_given ? tolerance : strict; }
};

void run_group(const Options& o, Report& r) {
    auto G = build_group(o.group);
    RepTheory R(G);
    r.set("order", G.order);
    r.set("abelian", G.abelian());
    r.set("conjugacy_classes", static_cast<int>(conjugacy_classes(G).size()));
    r.set("irreps", R.count());
    std::string dims;
    for (int j = 0; j < R.count(); ++j) dims += (j ? "," : "") + std::to_string(R.dim(j));
    r.set("irrep_dims", dims);
    r.set("commuting_pair_orbits", commuting_pair_orbit_count(G));
}

void run_fsym(const Options& o, Report& r) {
    RepTheory R(build_group(o.group));
    auto T = R.f_symbols();
    r.set("labels", T.n);
    if (o.dump) {
        for (int j = 0; j < T.n; ++j) {
            r.set("dim." + std::to_string(j), R.dim(j));
            r.set("dual." + std::to_string(j), T.dual[j]);
            for (int g = 0; g < R.group().order; ++g) {
                cplx c = R.irrep(j).character[g];
                r.set("chi." + std::to_string(j) + "." + std::to_string(g), number(c.real()) + " " + number(c.imag()));
            }
        }
        for (int a = 0; a < T.n; ++a)
            for (int b = 0; b < T.n; ++b)
                for (int c = 0; c < T.n; ++c)
                    if (R.fusion_coefficient(a, b, c))
                        r.set("N." + std::to_string(a) + "." + std::to_string(b) + "." + std::to_string(c),
                              R.fusion_coefficient(a, b, c));
        for (int i = 0; i < T.n; ++i)
            for (int j = 0; j < T.n; ++j)
                for (int m = 0; m < T.n; ++m)
                    for (int k = 0; k < T.n; ++k)
                        for (int l = 0; l < T.n; ++l)
                            for (int n = 0; n < T.n; ++n) {
                                cplx f = T(i, j, m, k, l, n);
                                if (f == 0.0) continue;
                                std::string key = "F";
                                for (int x : {i, j, m, k, l, n}) key += "." + std::to_string(x);
                                r.set(key, number(f.real()) + " " + number(f.imag()));
                            }
    }
    if (o.pentagon || !o.dump) r.check("pentagon_residual", verify_pentagon(T), o.tolerance);
}

void run_kitaev(const Options& o, Report& r) {
    auto G = build_group(o.group);
    auto lat = parse_torus(o.torus);
    r.set("torus", o.torus);
    if (!o.ground_dim && !o.algebra) fail(ErrorKind::InvalidParameter, "kitaev needs --ground-dim or --check-algebra");
    if (o.ground_dim) {
        GroundDimOptions opt;
        opt.budget = o.budget;
        opt.threads = o.threads;
        opt.randomized = o.randomized;
        auto res = ground_space_dimension(lat, G, opt);
        r.set("method", res.randomized ? "randomized" : "trace");
        if (!res.randomized) r.value("trace", res.trace, 1e-6);
        if (res.randomized) r.set("samples", res.samples);
        r.check_equal("ground_dim", res.dimension, commuting_pair_orbit_count(G));
    }
    if (o.algebra) {
        auto a = check_constraint_algebra(G, lat, 1, 5, o.budget);
        r.set("operators", a.operators);
        r.check("commutator", a.commutator, o.tol(1e-12));
        r.check("idempotence", a.idempotence, o.tol(1e-12));
        r.check("adjointness", a.adjointness, o.tol(1e-12));
    }
}

void run_stringnet(const Options& o, Report& r) {
    RepTheory R(build_group(o.group));
    auto T = R.f_symbols();
    auto lat = parse_torus(o.torus);
    r.set("torus", o.torus);
    if (o.plaquette < 0 || o.plaquette >= lat.np()) fail(ErrorKind::InvalidParameter, "plaquette out of range");
    bool any = false;
    if (o.check_duality) {
        any = true;
        SpinBasis B(lat, R);
        auto d = duality_compare_Bp(B, T, lat, o.plaquette, o.samples < 0 ? (R.group().order == 2 ? 0 : 20) : o.samples);
        r.set("pairs", d.pairs);
        r.set("nonzero_pairs", d.nonzero_pairs);
        r.check("duality_deviation", d.max_dev, o.tolerance);
    }
    if (o.check_projector) {
        any = true;
        auto cols = admissible_colorings(lat, R);
        Codec c(T.n, lat.ne());
        std::mt19937_64 rng(3);
        double idem = 0, comm = 0;
        int n = std::min<int>(static_cast<int>(cols.size()), o.samples < 0 ? 20 : std::max(1, o.samples));
        for (int t = 0; t < n; ++t) {
            auto s = basis_state(Basis::Spin, c, c.encode(cols[rng() % cols.size()]));
            auto once = apply_Bp(T, lat, o.plaquette, s);
            idem = std::max(idem, distance(apply_Bp(T, lat, o.plaquette, once), once));
            for (int q = 0; q < lat.np(); ++q)
                comm = std::max(comm, distance(apply_Bp(T, lat, q, once), apply_Bp(T, lat, o.plaquette, apply_Bp(T, lat, q, s))));
        }
        r.set("states", n);
        r.check("idempotence", idem, o.tolerance);
        r.check("commutator", comm, o.tolerance);
    }
    if (o.string_loop) {
        any = true;
        auto omega = o.omega.empty() ? OmegaData::identity(T.n) : parse_omega(read_file(o.omega));
        auto cols = admissible_colorings(lat, R);
        Codec c(T.n, lat.ne());
        StringPath loop;
        for (int k = 0; k <= 6; ++k) loop.vertices.push_back(lat.plaquettes[o.plaquette].walk[k % 6].vertex);
        std::mt19937_64 rng(2);
        double dev = 0;
        int n = std::min<int>(static_cast<int>(cols.size()), o.samples < 0 ? 20 : std::max(1, o.samples));
        for (int t = 0; t < n; ++t) {
            auto s = basis_state(Basis::Spin, c, c.encode(cols[rng() % cols.size()]));
            for (int st = 0; st < T.n; ++st)
                dev = std::max(dev, distance(apply_string_operator(T, lat, loop, {st}, omega, s), apply_Bp_s(T, lat, st, o.plaquette, s)));
        }
        r.set("states", n);
        r.check("string_loop_deviation", dev, o.tolerance);
    }
    if (!any) fail(ErrorKind::InvalidParameter, "stringnet needs --check-duality, --check-projector or --string-loop");
}

void run_ribbon(const Options& o, Report& r) {
    auto G = build_group(o.group);
    auto lat = parse_torus(o.torus);
    r.set("torus", o.torus);
    if (o.identity) {
        RepTheory R(G);
        auto T = R.f_symbols();
        SpinBasis B(lat, R);
        auto d = closed_ribbon_identity_check(B, T, lat, o.plaquette, o.samples < 0 ? (G.order == 2 ? 0 : 20) : o.samples);
        r.set("pairs", d.pairs);
        r.set("nonzero_pairs", d.nonzero_pairs);
        r.check("identity_deviation", d.max_dev, o.tolerance);
        if (o.path.empty()) return;
    }
    if (o.path.empty()) fail(ErrorKind::InvalidParameter, "ribbon needs --path or --check-identity");
    auto strip = ribbon_strip(lat, parse_sites(o.path));
    std::map<std::pair<int, int>, cplx> coef;
    auto hg = parse_ints(o.pair);
    if (hg.size() != 2) fail(ErrorKind::InvalidParameter, "--pair expects h,g");
    int h = hg[0];
    if (h < 0 || h >= G.order || hg[1] < 0 || hg[1] >= G.order) fail(ErrorKind::InvalidParameter, "--pair out of range");
    if (o.charge >= 0) {
        // electric charge j: sum_g chi_j(g) W^{(h,g)}
        RepTheory R(G);
        if (o.charge >= R.count()) fail(ErrorKind::InvalidParameter, "--charge out of range");
        for (int g = 0; g < G.order; ++g) coef[{h, g}] = R.irrep(o.charge).character[g];
        r.set("charge", o.charge);
    } else {
        coef[{h, hg[1]}] = 1.0;
    }
    auto W = ribbon_operator(G, lat, strip, coef);
    r.set("triangles", static_cast<int>(strip.triangles.size()));
    r.set("closed", strip.closed());
    auto gs = trivial_ground_state(G, lat);
    if (!o.endpoints) {
        r.value("norm", apply(W, gs).norm(), 1e-12);
        return;
    }
    auto rep = endpoint_locality_check(W, gs);
    auto join = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        return s;
    };
    r.set("excited_vertices", join(rep.found.vertices));
    r.set("excited_plaquettes", join(rep.found.plaquettes));
    r.set("end_vertices", join(rep.end_vertices));
    r.set("end_plaquettes", join(rep.end_plaquettes));
    r.set("endpoints_only", rep.ok);
    r.failed = r.failed || !rep.ok;
}

GluedComplex3 load_complex(const Options& o) {
    std::string text = read_file(o.complex);
    if (!o.boundary.empty()) text += "\n" + read_file(o.boundary);
    return parse_complex(text);
}

void run_tv(const Options& o, Report& r) {
    auto G = build_group(o.group);
    RepTheory R(G);
    auto T = R.f_symbols();
    auto cx = load_complex(o);
    StateSumOptions opt;
    opt.threads = o.threads;
    r.set("tetrahedra", cx.ntet());
    r.set("closed", cx.closed());
    TVValue z = cx.closed() ? tv_closed(cx, R, T, opt) : tv_boundary(cx, R, T, boundary_from_colors(cx, R), opt);
    r.value("Z", z.value.real(), o.tolerance);
    if (std::abs(z.value.imag()) > o.tolerance) r.value("Z_imag", z.value.imag(), o.tolerance);
    r.set("terms", z.terms);
    if (o.compare_dw) {
        if (!cx.closed()) fail(ErrorKind::HasBoundary, "--compare-dw needs a closed complex");
        r.check("dw_deviation", std::abs(z.value - dw_value(cx, G, opt)), o.tolerance);
    }
}

void run_dw(const Options& o, Report& r) {
    auto G = build_group(o.group);
    auto cx = load_complex(o);
    StateSumOptions opt;
    opt.threads = o.threads;
    r.set("tetrahedra", cx.ntet());
    r.value("Z", dw_value(cx, G, opt), o.tolerance);
}

void run_cylinder(const Options& o, Report& r) {
    RepTheory R(build_group(o.group));
    auto T = R.f_symbols();
    auto lat = parse_torus(o.torus);
    std::vector<int> order(lat.np());
    std::iota(order.begin(), order.end(), 0);
    if (!o.order.empty()) order = parse_ints(o.order);
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < lat.np(); ++i)
        if (static_cast<int>(sorted.size()) != lat.np() || sorted[i] != i)
            fail(ErrorKind::InvalidParameter, "--order must be a permutation of the plaquettes");
    StateSumOptions opt;
    opt.threads = o.threads;
    int samples = o.samples < 0 ? (R.group().order == 2 ? 0 : 20) : o.samples;
    auto res = compare_projector(lat, R, T, order, samples, 3, opt);
    r.set("torus", o.torus);
    r.set("pairs", res.pairs);
    r.set("nonzero_pairs", res.nonzero_pairs);
    r.check("projector_deviation", res.max_dev, o.tolerance);
}

void run_duality(const Options& o, Report& r) {
    auto G = build_group(o.group);
    RepTheory R(G);
    HoneycombLattice lat;
    Graph gr = o.theta ? theta_graph() : static_cast<Graph>(lat = parse_torus(o.torus));
    r.set("graph", o.theta ? std::string("theta") : o.torus);
    SpinBasis B(gr, R);
    auto cols = admissible_colorings(gr, R);
    double gram = 0;
    for (std::size_t a = 0; a < cols.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b)
            gram = std::max(gram, std::abs(B.overlap(cols[a], cols[b]) - (a == b ? 1.0 : 0.0)));
    r.set("admissible_colorings", static_cast<int>(cols.size()));
    r.check("gram_deviation", gram, o.tolerance);
    Codec c = group_codec(G, gr);
    if (c.size() > o.budget) fail(ErrorKind::BudgetExceeded, "group basis exceeds budget");
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    double trip = 0;
    for (int t = 0; t < o.states; ++t) {
        StateVector s(Basis::Group, c);
        for (int k = 0; k < 4; ++k) s.add(rng() % c.size(), cplx(nd(rng), nd(rng)));
        for (int v = 0; v < gr.nv; ++v) s = apply_electric_A(G, gr, v, s);
        if (s.norm2() < 1e-20) continue;
        s.normalize();
        trip = std::max(trip, distance(to_group_basis(B, to_spin_basis(B, s), o.budget), s));
    }
    r.set("states", o.states);
    r.check("roundtrip_deviation", trip, o.tol(1e-10));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"topoforge: lattice TQFT checks for finite groups"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* s, bool lattice) {
        s->add_option("--group", o.group, "Z<n>, S3 or D4")->required();
        if (lattice) s->add_option("--torus", o.torus, "honeycomb torus LxM");
        s->add_option("--tolerance", o.tolerance, "check threshold");
        s->add_option("--threads", o.threads, "worker threads (default TOPOFORGE_THREADS or all cores)");
        s->add_option("--budget", o.budget, "basis size limit");
        s->add_flag("--json", o.json, "one JSON object instead of key = value lines");
    };
    std::map<std::string, void (*)(const Options&, Report&)> runners;

    auto* g = app.add_subcommand("group", "group summary");
    common(g, false);
    runners["group"] = run_group;

    auto* f = app.add_subcommand("fsym", "F-symbols and the pentagon");
    common(f, false);
    f->add_flag("--check-pentagon", o.pentagon);
    f->add_flag("--dump", o.dump, "characters, fusion and F tables");
    runners["fsym"] = run_fsym;

    auto* k = app.add_subcommand("kitaev", "quantum double model");
    common(k, true);
    k->add_flag("--ground-dim", o.ground_dim);
    k->add_flag("--randomized", o.randomized, "orbit sampling instead of the projector trace");
    k->add_flag("--check-algebra", o.algebra);
    runners["kitaev"] = run_kitaev;

    auto* s = app.add_subcommand("stringnet", "string-net model");
    common(s, true);
    s->add_flag("--check-duality", o.check_duality);
    s->add_flag("--check-projector", o.check_projector);
    s->add_flag("--string-loop", o.string_loop, "hexagon string operator against B_p^s");
    s->add_option("--omega", o.omega, "Omega matrices file");
    s->add_option("--samples", o.samples, "sampled states (0 = exhaustive where supported)");
    s->add_option("--plaquette", o.plaquette);
    runners["stringnet"] = run_stringnet;

    auto* rb = app.add_subcommand("ribbon", "ribbon operators");
    common(rb, true);
    rb->add_option("--path", o.path, "sites p:v,p:v,...");
    rb->add_option("--pair", o.pair, "h,g");
    rb->add_option("--charge", o.charge, "sum over g weighted by the character of irrep j");
    rb->add_flag("--check-endpoints", o.endpoints);
    rb->add_flag("--check-identity", o.identity, "closed ribbon against the character expansion");
    rb->add_option("--samples", o.samples);
    rb->add_option("--plaquette", o.plaquette);
    runners["ribbon"] = run_ribbon;

    auto* tv = app.add_subcommand("tv", "Turaev-Viro state sum");
    common(tv, false);
    tv->add_option("--complex", o.complex)->required();
    tv->add_option("--boundary", o.boundary, "file of color lines");
    tv->add_flag("--compare-dw", o.compare_dw);
    runners["tv"] = run_tv;

    auto* dw = app.add_subcommand("dw", "Dijkgraaf-Witten count");
    common(dw, false);
    dw->add_option("--complex", o.complex)->required();
    runners["dw"] = run_dw;

    auto* cy = app.add_subcommand("cylinder-check", "ground projector against the cylinder amplitude");
    common(cy, true);
    cy->add_option("--samples", o.samples, "sampled pairs (0 = all)");
    cy->add_option("--order", o.order, "plaquette order p,q,...");
    runners["cylinder-check"] = run_cylinder;

    auto* du = app.add_subcommand("duality", "group <-> spin network round trip and Gram matrix");
    common(du, true);
    du->add_flag("--theta", o.theta, "use the theta graph");
    du->add_option("--states", o.states);
    runners["duality"] = run_duality;

    try {
        app.parse(argc, argv);
        o.tolerance_given = app.get_subcommands().front()->count("--tolerance") > 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    Report r;
    r.tolerance = o.tolerance;
    std::string echo = sub->get_name();
    for (int i = 2; i < argc; ++i) echo += std::string(" ") + argv[i];
    r.set("command", echo);
    r.set("group", o.group);
    auto t0 = std::chrono::steady_clock::now();
    try {
        runners.at(sub->get_name())(o, r);
    } catch (const Error& e) {
        std::cerr << "topoforge: " << e.what() << '\n';
        return exit_code(e.kind());
    }
    r.set("wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    r.set("status", r.failed ? "fail" : "pass");
    print(r.j, o.json);
    return r.failed ? kCheckFailed : kOk;
}
