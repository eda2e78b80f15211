#include "app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "imgtn/certify.hpp"
#include "imgtn/ht_network.hpp"
#include "imgtn/number_format.hpp"
#include "imgtn/parallel.hpp"
#include "imgtn/tensor_train.hpp"
#include "imgtn/theorems.hpp"

namespace imgtn::cli {

namespace {

constexpr double exactness_tolerance = 1e-6;

struct Options {
    std::string subcommand;
    std::string family;
    std::vector<int> ns;
    std::uint64_t m = 0;
    int param = 0;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    std::string out;
    std::string report;
    std::string net;
    std::string quantity = "row_configs";
    std::string cut;
    std::string format = "csv";
    std::size_t probes = 0;
    int trials = 1;
    int jobs = 0;
    bool timing = false;
};

/// The run configuration echoed into every report. Parallelism and timing are left out
/// because they must not change any reported byte.
Json config_json(const Options& o) {
    Json c = Json::object();
    c["subcommand"] = o.subcommand;
    c["family"] = o.family;
    c["n"] = o.ns;
    c["m"] = o.m;
    c["param"] = o.param;
    c["seed"] = o.seed;
    c["tol"] = o.tol;
    c["out"] = o.out;
    c["report"] = o.report;
    c["net"] = o.net;
    c["quantity"] = o.quantity;
    c["cut"] = o.cut;
    c["format"] = o.format;
    c["probes"] = o.probes;
    c["trials"] = o.trials;
    return c;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

std::string csv_cell(const Json& v) {
    if (v.is_string()) return csv_field(v.get<std::string>());
    if (v.is_null()) return {};
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw precondition_error("cannot write " + path);
    os << text;
    if (!os) throw precondition_error("failed writing " + path);
}

bool is_generator_kind(const std::string& name) {
    return name == "rect" || name == "bars" || name == "stacked" || name == "random";
}

GeneratorSpec generator_spec(const Options& o) {
    const int param = o.family == "random" ? static_cast<int>(o.m) : o.param;
    return GeneratorSpec::parse(o.family, param, o.seed);
}

int single_n(const Options& o) {
    if (o.ns.size() != 1) throw precondition_error("--n needs exactly one value for " + o.subcommand);
    return o.ns.front();
}

/// `--family` names either an existing family file or a generator (then `--n` is required).
ImageFamily resolve_family(const Options& o) {
    if (o.family.empty()) throw precondition_error("--family is required");
    if (std::filesystem::exists(o.family)) {
        auto family = load_family(o.family);
        if (!o.ns.empty() && (o.ns.size() != 1 || o.ns.front() != family.side()))
            throw precondition_error("--n does not match the side of " + o.family);
        return family;
    }
    if (!is_generator_kind(o.family))
        throw precondition_error("no family file or generator named '" + o.family + "'");
    return generate(generator_spec(o), single_n(o));
}

void add_family_summary(Report& r, const ImageFamily& family) {
    r.summary.emplace_back("n", family.side());
    r.summary.emplace_back("family", family.meta().name);
    r.summary.emplace_back("members", family.size());
}

/// Like std::max, but a NaN on either side wins so it cannot pass a threshold test.
double nan_max(double a, double b) { return std::isnan(a) || b > a || std::isnan(b) ? b : a; }

bool within_tolerance(double dev) { return dev < exactness_tolerance; }

/// Largest |g(x) - f(x)| over the members and `probes` seeded random images.
template <class Eval>
double max_deviation(const ImageFamily& family, std::size_t probes, std::uint64_t seed, Eval&& g) {
    double worst = 0.0;
    for (const auto& x : family.members()) worst = nan_max(worst, std::abs(g(x) - 1.0));
    for (const auto& x : random_images(family.side(), probes, seed))
        worst = nan_max(worst, std::abs(g(x) - family(x)));
    return worst;
}

struct Outcome {
    Report report;
    int code = exit_ok;
};

Outcome cmd_certify(const Options& o, std::ostream& err) {
    const auto family = resolve_family(o);
    const int jobs = resolve_jobs(o.jobs);
    const auto a = certify_assumptions(family, jobs);
    const auto lemma = verify_lemma1(family, jobs);
    const auto violations = std::count_if(lemma.begin(), lemma.end(), [](const auto& r) { return !r.holds; });

    Outcome res;
    auto& r = res.report;
    add_family_summary(r, family);
    r.summary.emplace_back("max_config_count", a.max_config_count);
    r.summary.emplace_back("max_fixed_row_rank", a.max_rank);
    r.summary.emplace_back("row_cut_bound_violations", violations);

    Table counts{"row_configs", {"i", "config_count"}, {}};
    for (std::size_t i = 0; i < a.config_counts.size(); ++i) counts.rows.push_back({i + 1, a.config_counts[i]});
    Table ranks{"fixed_row_ranks", {"i", "y", "rank"}, {}};
    for (const auto& f : a.ranks) ranks.rows.push_back({f.row, config_to_string(f.y), f.rank});
    Table lemma_table{"row_cut_bound", {"i", "rank_Fi", "bound", "ok"}, {}};
    for (const auto& l : lemma) lemma_table.rows.push_back({l.row, l.rank, l.bound, l.holds});
    r.tables = {std::move(counts), std::move(ranks), std::move(lemma_table)};

    if (violations > 0) {
        err << "verification failed: " << violations << " row-cut bounds violated\n";
        res.code = exit_verification;
    }
    return res;
}

Outcome cmd_tt(const Options& o, std::ostream& err) {
    const auto family = resolve_family(o);
    const int n = family.side();
    const int jobs = resolve_jobs(o.jobs);
    const std::size_t probes = o.probes ? o.probes : 10000;
    const auto tt = tt_from_family<double>(family, o.tol);
    const double dev = max_deviation(family, probes, o.seed, [&](const BinaryImage& x) { return tt_eval(tt, x); });
    const auto dims = tt.bond_dims();
    const auto exact = parallel_map(static_cast<std::size_t>(n * n - 1), jobs, [&](std::size_t t) {
        return region_rank(family, Region::pixel_prefix(n, static_cast<int>(t) + 1));
    });

    Outcome res;
    auto& r = res.report;
    Table bonds{"bonds", {"k", "bond", "exact_rank"}, {}};
    bool minimal = true;
    std::size_t max_exact = 0;
    for (int k = 1; k < n * n; ++k) {
        const auto e = exact[static_cast<std::size_t>(k - 1)];
        const auto l = dims[static_cast<std::size_t>(k)];
        minimal = minimal && static_cast<std::size_t>(l) == std::max<std::size_t>(e, 1);
        max_exact = std::max(max_exact, e);
        bonds.rows.push_back({k, l, e});
    }
    add_family_summary(r, family);
    r.summary.emplace_back("max_bond", tt.max_bond());
    r.summary.emplace_back("max_prefix_rank", max_exact);
    r.summary.emplace_back("minimal", minimal);
    r.summary.emplace_back("probes", probes);
    r.summary.emplace_back("max_deviation", dev);
    r.summary.emplace_back("exact", within_tolerance(dev));
    r.tables.push_back(std::move(bonds));

    if (!o.out.empty()) {
        std::ostringstream os;
        write_tt(os, tt);
        write_text_file(o.out, os.str());
    }
    if (!within_tolerance(dev) || !minimal) {
        err << "verification failed: max deviation " << format_double(dev)
            << (minimal ? "" : ", bond dimensions exceed the exact ranks") << '\n';
        res.code = exit_verification;
    }
    return res;
}

/// Pads to a power of two when needed and records that in the report.
ImageFamily padded_for_tree(const ImageFamily& family, Report& r) {
    const int padded = next_power_of_two(std::max(2, family.side()));
    if (padded == family.side()) return family;
    r.notes.push_back("padded from n=" + std::to_string(family.side()) + " to n=" + std::to_string(padded) +
                      " with white pixels");
    r.summary.emplace_back("padded_side", padded);
    return pad_family(family, padded);
}

Outcome cmd_ht(const Options& o, std::ostream& err) {
    const auto family = resolve_family(o);
    const int jobs = resolve_jobs(o.jobs);
    const std::size_t probes = o.probes ? o.probes : 10000;

    Outcome res;
    auto& r = res.report;
    add_family_summary(r, family);
    const auto padded = padded_for_tree(family, r);
    const int n = padded.side();
    const auto build = ht_build<double>(padded, o.tol);
    const auto& net = build.network;
    const double dev = max_deviation(family, probes, o.seed, [&](const BinaryImage& x) {
        return ht_eval(net, x.side() == n ? x : pad_image(x, n));
    });
    const auto exact = layer_exact_ranks(padded, jobs);
    const auto& tree = net.tree();

    Table layers{"layers", {"layer", "channels", "min_node_rank", "max_node_rank", "max_exact_rank", "perimeter"}, {}};
    bool minimal = true;
    for (int i = 1; i <= tree.layers(); ++i) {
        const auto& ranks = build.node_ranks[static_cast<std::size_t>(i - 1)];
        const auto e = exact[static_cast<std::size_t>(i - 1)];
        if (i >= 2) minimal = minimal && static_cast<std::size_t>(net.channels(i)) == std::max<std::size_t>(e, 1);
        layers.rows.push_back({i, net.channels(i), *std::min_element(ranks.begin(), ranks.end()),
                               *std::max_element(ranks.begin(), ranks.end()), e,
                               tree.support(tree.layer(i).front()).perimeter()});
    }
    r.summary.emplace_back("layers", tree.layers());
    r.summary.emplace_back("max_channels", *std::max_element(net.channel_counts().begin(), net.channel_counts().end()));
    r.summary.emplace_back("minimal", minimal);
    r.summary.emplace_back("probes", probes);
    r.summary.emplace_back("max_deviation", dev);
    r.summary.emplace_back("exact", within_tolerance(dev));
    r.tables.push_back(std::move(layers));

    if (!o.out.empty()) {
        std::ostringstream os;
        write_ht(os, net);
        write_text_file(o.out, os.str());
    }
    if (!within_tolerance(dev) || !minimal) {
        err << "verification failed: max deviation " << format_double(dev)
            << (minimal ? "" : ", channel counts differ from the exact ranks") << '\n';
        res.code = exit_verification;
    }
    return res;
}

Outcome cmd_diag(const Options& o, std::ostream& err) {
    Outcome res;
    auto& r = res.report;
    const std::size_t probes = o.probes ? o.probes : 1000;
    std::optional<HTNetwork<double>> input;
    std::optional<ImageFamily> padded;
    if (!o.net.empty()) {
        std::ifstream is(o.net, std::ios::binary);
        if (!is) throw precondition_error("cannot open " + o.net);
        input.emplace(read_ht(is));
    } else {
        const auto family = resolve_family(o);
        add_family_summary(r, family);
        padded.emplace(padded_for_tree(family, r));
        input.emplace(ht_from_family<double>(*padded, o.tol));
    }
    const auto diag = diagonalize(*input);
    const int n = input->side();

    double dev = 0.0;
    for (const auto& x : random_images(n, probes, o.seed))
        dev = nan_max(dev, std::abs(ht_eval(*input, x) - ht_eval(diag, x)));
    if (padded)
        dev = nan_max(dev, max_deviation(*padded, 0, o.seed, [&](const BinaryImage& x) { return ht_eval(diag, x); }));

    Table channels{"channels", {"layer", "channels", "diagonal_channels", "squared"}, {}};
    bool squared = true;
    for (int i = 1; i <= input->layers(); ++i) {
        const auto l = input->channels(i);
        const auto d = diag.channels(i);
        const bool ok = i == 1 ? d == 4 : d == l * l;
        squared = squared && ok;
        channels.rows.push_back({i, l, d, ok});
    }
    r.summary.emplace_back("network_side", n);
    r.summary.emplace_back("channels_squared", squared);
    r.summary.emplace_back("probes", probes);
    r.summary.emplace_back("max_deviation", dev);
    r.summary.emplace_back("exact", within_tolerance(dev));
    r.tables.push_back(std::move(channels));

    if (!o.out.empty()) {
        std::ostringstream os;
        write_ht(os, diag);
        write_text_file(o.out, os.str());
    }
    if (!within_tolerance(dev) || !squared) {
        err << "verification failed: max deviation " << format_double(dev) << '\n';
        res.code = exit_verification;
    }
    return res;
}

void add_fit_row(Table& t, const std::string& series, std::span<const ScalingPoint> points) {
    std::vector<ScalingPoint> copy(points.begin(), points.end());
    try {
        const auto s = make_scaling_report(series, std::move(copy));
        t.rows.push_back({series, s.fit.slope, s.fit.intercept, s.fit.points});
    } catch (const precondition_error&) {
        t.rows.push_back({series, nullptr, nullptr, 0});
    }
}

ImageFamily matched_random(int n, std::size_t m, std::uint64_t seed) {
    if (m == 0) return ImageFamily(n, FamilyMeta{"random:m=0", seed});
    return gen_random_family(n, m, seed);
}

Outcome cmd_scale(const Options& o, std::ostream&) {
    if (!is_generator_kind(o.family)) throw precondition_error("scale needs a generator name for --family");
    if (o.ns.empty()) throw precondition_error("--n is required");
    if (!std::is_sorted(o.ns.begin(), o.ns.end()) ||
        std::adjacent_find(o.ns.begin(), o.ns.end()) != o.ns.end())
        throw precondition_error("--n values must be strictly ascending");
    const auto spec = generator_spec(o);
    const int jobs = resolve_jobs(o.jobs);

    Outcome res;
    auto& r = res.report;
    r.summary.emplace_back("quantity", o.quantity);
    r.summary.emplace_back("random_seed", o.seed);
    r.notes.push_back("random column: uniform random family with the structured member count");

    if (o.quantity == "layer_channels") {
        Table series{"series", {"n", "layer", "perimeter", "structured", "random"}, {}};
        Table fits{"fit", {"n", "series", "slope", "intercept", "offset"}, {}};
        for (int n : o.ns) {
            if (!is_power_of_two(n)) throw precondition_error("layer_channels needs powers of two for --n");
            const auto family = generate(spec, n);
            const auto structured = layer_exact_ranks(family, jobs);
            const auto random = layer_exact_ranks(matched_random(n, family.size(), o.seed), jobs);
            const TreeStructure tree(n);
            for (int i = 1; i <= tree.layers(); ++i)
                series.rows.push_back({n, i, tree.support(tree.layer(i).front()).perimeter(),
                                       structured[static_cast<std::size_t>(i - 1)],
                                       random[static_cast<std::size_t>(i - 1)]});
            for (const auto& [label, values] : {std::pair{"structured", &structured}, std::pair{"random", &random}}) {
                std::vector<double> x, y;
                for (std::size_t t = 0; t < values->size(); ++t)
                    if ((*values)[t] > 0) {
                        x.push_back(static_cast<double>(t + 1));
                        y.push_back(std::log2(static_cast<double>((*values)[t])));
                    }
                if (x.size() < 2) {
                    fits.rows.push_back({n, label, nullptr, nullptr, nullptr});
                    continue;
                }
                const auto fit = fit_line(x, y);
                double offset = -std::numeric_limits<double>::infinity();
                for (std::size_t t = 0; t < x.size(); ++t) offset = std::max(offset, y[t] - fit.slope * x[t]);
                fits.rows.push_back({n, label, fit.slope, fit.intercept, offset});
            }
        }
        r.tables = {std::move(series), std::move(fits)};
        return res;
    }

    const auto q = parse_quantity(o.quantity);
    if (o.ns.size() < 2) throw precondition_error("a slope fit needs at least 2 values of --n");
    Table series{"series", {"n", "members", "structured", "random"}, {}};
    std::vector<ScalingPoint> structured, random;
    for (int n : o.ns) {
        const auto family = generate(spec, n);
        const double s = measure(family, q, jobs);
        const double rv = measure(matched_random(n, family.size(), o.seed), q, jobs);
        structured.push_back({static_cast<double>(n), s});
        random.push_back({static_cast<double>(n), rv});
        series.rows.push_back({n, family.size(), s, rv});
    }
    Table fits{"fit", {"series", "slope", "intercept", "points"}, {}};
    add_fit_row(fits, "structured", structured);
    add_fit_row(fits, "random", random);
    r.tables = {std::move(series), std::move(fits)};
    return res;
}

Outcome cmd_baseline(const Options& o, std::ostream&) {
    if (o.trials < 1) throw precondition_error("--trials must be at least 1");
    std::optional<ImageFamily> family;
    if (!o.family.empty()) family.emplace(resolve_family(o));
    const int n = family ? family->side() : single_n(o);
    const std::uint64_t m = family ? family->size() : o.m;
    if (m == 0) throw precondition_error("baseline needs --m or a nonempty --family");
    if (family && o.m != 0 && o.m != m) throw precondition_error("--m differs from the family's member count");
    const auto cut = o.cut.empty() ? Region::row_prefix(n, std::max(1, n / 2)) : Region::parse(n, o.cut);
    const std::optional<std::size_t> structured =
        family ? std::optional<std::size_t>(region_rank(*family, cut)) : std::nullopt;

    const auto results = parallel_map(static_cast<std::size_t>(o.trials), resolve_jobs(o.jobs), [&](std::size_t t) {
        return random_baseline_profile(n, m, o.seed + t, cut);
    });

    Outcome res;
    auto& r = res.report;
    Table trials{"trials", {"seed", "rank", "cap", "structured_rank", "random_ge_structured"}, {}};
    std::size_t lo = results.front().rank, hi = lo, ge = 0;
    for (std::size_t t = 0; t < results.size(); ++t) {
        const auto& b = results[t];
        lo = std::min(lo, b.rank);
        hi = std::max(hi, b.rank);
        const bool at_least = structured && b.rank >= *structured;
        ge += at_least ? 1 : 0;
        trials.rows.push_back({o.seed + t, b.rank, b.cap, structured ? Json(*structured) : Json(nullptr),
                               structured ? Json(at_least) : Json(nullptr)});
    }
    r.summary.emplace_back("n", n);
    r.summary.emplace_back("m", m);
    r.summary.emplace_back("cut", cut.to_string());
    r.summary.emplace_back("cap", results.front().cap);
    r.summary.emplace_back("min_random_rank", lo);
    r.summary.emplace_back("max_random_rank", hi);
    if (structured) {
        r.summary.emplace_back("structured_rank", *structured);
        r.summary.emplace_back("fraction_random_ge_structured",
                               static_cast<double>(ge) / static_cast<double>(results.size()));
    }
    r.tables.push_back(std::move(trials));
    return res;
}

Outcome cmd_crosscheck(const Options& o, std::ostream& err) {
    const auto family = resolve_family(o);
    const std::size_t probes = o.probes ? o.probes : 10000;
    const auto c = tt_ht_cross_check(family, probes, o.seed);
    Outcome res;
    auto& r = res.report;
    add_family_summary(r, family);
    if (c.padded_side != family.side())
        r.notes.push_back("network built on the white-padded n=" + std::to_string(c.padded_side) + " grid");
    r.summary.emplace_back("probes", c.probes);
    r.summary.emplace_back("max_tt_ht", c.max_tt_ht);
    r.summary.emplace_back("max_tt_f", c.max_tt_f);
    r.summary.emplace_back("max_ht_f", c.max_ht_f);
    const double worst = nan_max(nan_max(c.max_tt_ht, c.max_tt_f), c.max_ht_f);
    r.summary.emplace_back("ok", within_tolerance(worst));
    if (!within_tolerance(worst)) {
        err << "verification failed: max deviation " << format_double(worst) << '\n';
        res.code = exit_verification;
    }
    return res;
}

int cmd_gen(const Options& o, std::ostream& out, std::ostream& err) {
    if (!is_generator_kind(o.family))
        throw precondition_error("unknown family '" + o.family + "' (expected rect, bars, stacked, random)");
    const auto family = generate(generator_spec(o), single_n(o));
    if (o.out.empty()) {
        write_family(out, family);
        err << "members: " << family.size() << '\n';
    } else {
        std::ostringstream os;
        write_family(os, family);
        write_text_file(o.out, os.str());
        out << "members: " << family.size() << '\n';
    }
    return exit_ok;
}

void add_options(CLI::App* sc, Options& o, bool network_flags) {
    sc->add_option("--family", o.family, "generator (rect, bars, stacked, random) or family file");
    sc->add_option("--n", o.ns, "grid side; a comma-separated list for scale")->delimiter(',');
    sc->add_option("--m", o.m, "member count of a random family");
    sc->add_option("--param", o.param, "min_side (rect, stacked) or min_len (bars); 0 keeps the default");
    sc->add_option("--seed", o.seed, "random seed");
    sc->add_option("--tol", o.tol, "relative singular-value cutoff")->capture_default_str();
    sc->add_option("--out", o.out, "output file for the family or network");
    sc->add_option("--report", o.report, "report file (default: stdout)");
    sc->add_option("--format", o.format, "report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sc->add_option("--jobs", o.jobs, "worker threads; 0 uses all cores");
    sc->add_flag("--timing", o.timing, "add wall-clock seconds to the report");
    if (network_flags) sc->add_option("--probes", o.probes, "random probe images for the exactness check");
}

} // namespace

std::string render_csv(const Report& report) {
    std::ostringstream os;
    os << "# tool: " << tool_name << ' ' << tool_version << '\n';
    os << "# config: " << report.config.dump() << '\n';
    for (const auto& note : report.notes) os << "# note: " << note << '\n';
    os << "# table: summary\nkey,value\n";
    for (const auto& [key, value] : report.summary) os << key << ',' << csv_cell(value) << '\n';
    for (const auto& t : report.tables) {
        os << "\n# table: " << t.name << '\n';
        for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
            os << '\n';
        }
    }
    return os.str();
}

std::string render_json(const Report& report) {
    Json j = Json::object();
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["config"] = report.config;
    j["notes"] = report.notes;
    j["summary"] = Json::object();
    for (const auto& [key, value] : report.summary) j["summary"][key] = value;
    j["tables"] = Json::array();
    for (const auto& t : report.tables)
        j["tables"].push_back(Json{{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}});
    return j.dump(2) + '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Tensor-network representations of binary-image families", tool_name};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);
    const std::pair<const char*, const char*> commands[] = {
        {"gen", "generate a family file"},
        {"certify", "row-configuration counts, fixed-row ranks and the row-cut bound table"},
        {"tt", "build and verify a tensor train"},
        {"ht", "build and verify a hierarchical Tucker network"},
        {"diag", "convert a network to diagonal form and verify it"},
        {"scale", "measure a quantity over several n against a random baseline"},
        {"baseline", "random-family rank at a cut"},
        {"crosscheck", "compare tensor-train and network evaluations"},
    };
    for (const auto& [name, description] : commands) {
        auto* sc = app.add_subcommand(name, description);
        const std::string cmd = name;
        add_options(sc, o, cmd == "tt" || cmd == "ht" || cmd == "diag" || cmd == "crosscheck");
        if (cmd == "diag") sc->add_option("--net", o.net, "generalized network file to convert");
        if (cmd == "scale")
            sc->add_option("--quantity", o.quantity,
                           "members, row_configs, fixed_row_rank, row_prefix_rank, middle_cut_rank, prefix_rank "
                           "or layer_channels")
                ->capture_default_str();
        if (cmd == "baseline") {
            sc->add_option("--cut", o.cut, "row:i, pixel:k or rect:top,left,h,w (default row:n/2)");
            sc->add_option("--trials", o.trials, "number of consecutive seeds")->capture_default_str();
        }
        sc->callback([&o, cmd] { o.subcommand = cmd; });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << tool_name << ' ' << tool_version << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nrun with --help for usage\n";
        return exit_input;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        if (o.subcommand == "gen") return cmd_gen(o, out, err);
        Outcome res;
        if (o.subcommand == "certify") res = cmd_certify(o, err);
        else if (o.subcommand == "tt") res = cmd_tt(o, err);
        else if (o.subcommand == "ht") res = cmd_ht(o, err);
        else if (o.subcommand == "diag") res = cmd_diag(o, err);
        else if (o.subcommand == "scale") res = cmd_scale(o, err);
        else if (o.subcommand == "baseline") res = cmd_baseline(o, err);
        else res = cmd_crosscheck(o, err);

        res.report.config = config_json(o);
        if (o.timing)
            res.report.summary.emplace_back(
                "wall_clock_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        const auto text = o.format == "json" ? render_json(res.report) : render_csv(res.report);
        if (o.report.empty()) out << text;
        else write_text_file(o.report, text);
        return res.code;
    } catch (const numerical_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_verification;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }
}

} // namespace imgtn::cli
