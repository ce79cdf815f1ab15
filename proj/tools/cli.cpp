#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace toral::cli {

namespace {

/// Malformed invocation or payload; maps to exit status 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const Json& require(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw UsageError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

i64 require_int(const Json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_number_integer()) throw UsageError(std::string("field \"") + key + "\" must be an integer");
    return v.get<i64>();
}

std::size_t require_count(const Json& j, const char* key) {
    i64 v = require_int(j, key);
    if (v < 0) throw UsageError(std::string("field \"") + key + "\" must be non-negative");
    return static_cast<std::size_t>(v);
}

std::vector<std::string> string_list(const Json& j, const char* what) {
    if (!j.is_array()) throw UsageError(std::string(what) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) throw UsageError(std::string(what) + " must be an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

VariableSubset subset_from_json(const Json& j, std::size_t n) {
    if (!j.is_array()) throw UsageError("subset must be an array of variable indices");
    VariableSubset mask = 0;
    for (const auto& e : j) {
        if (!e.is_number_integer()) throw UsageError("subset must be an array of variable indices");
        i64 i = e.get<i64>();
        if (i < 1 || static_cast<std::size_t>(i) > n) throw UsageError("subset index out of range");
        mask |= VariableSubset{1} << (i - 1);
    }
    return mask;
}

Json subset_to_json(VariableSubset mask) {
    Json out = Json::array();
    for (int i = 0; i < 64; ++i)
        if (mask >> i & 1) out.push_back(i + 1);
    return out;
}

Json fractions(const std::vector<QZ>& v) {
    Json out = Json::array();
    for (auto q : v) out.push_back(q.to_string());
    return out;
}

Json orders(const std::vector<i64>& v) {
    Json out = Json::array();
    for (auto x : v) out.push_back(x);
    return out;
}

Json read_payload(const std::string& arg) {
    std::size_t first = arg.find_first_not_of(" \t\r\n");
    std::string text;
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
        text = arg;
    } else {
        std::ifstream in(arg);
        if (!in) throw UsageError("cannot read payload file '" + arg + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw UsageError(std::string("invalid JSON payload: ") + e.what());
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Serialization

Json to_json(const RDiagonalForm& q) {
    Json entries = Json::array();
    for (const auto& u : q.entries()) entries.push_back(u.to_string());
    return Json{{"field", q.field().spelling()}, {"n", q.vars()}, {"entries", entries}};
}

Json to_json(const LoopNormalForm& lnf) {
    Json slots = Json::array();
    for (const auto& [mask, form] : lnf.slots) {
        Json entries = Json::array();
        for (auto cls : form.entries()) entries.push_back(class_representative(lnf.field, cls).to_string());
        slots.push_back(Json{{"subset", subset_to_json(mask)}, {"form", entries}});
    }
    return Json{{"field", lnf.field.spelling()},
                {"n", lnf.n},
                {"dim", lnf.dim()},
                {"hyperbolic_count", lnf.hyperbolic_count},
                {"slots", slots}};
}

Json to_json(const BrauerMatrix& b) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < b.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < b.size(); ++j) row.push_back(b(i, j).to_string());
        rows.push_back(row);
    }
    return Json{{"n", b.size()}, {"matrix", rows}};
}

Json to_json(const ToralDescriptor& t) {
    Json factors = Json::array();
    for (const auto& f : t.factors) factors.push_back(Json{{"s", f.s}, {"r", f.r}, {"i", f.i}, {"j", f.j}});
    return Json{{"d", t.d}, {"n", t.n}, {"m", t.m}, {"s0", t.s0}, {"factors", factors}};
}

Json to_json(const IntMatrix& g) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < g.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < g.size(); ++j) row.push_back(g(i, j));
        rows.push_back(row);
    }
    return rows;
}

RDiagonalForm form_from_json(const Json& j) {
    if (j.is_object() && j.contains("slots")) return loop_form_from_json(j).to_diagonal();
    const auto& field_json = require(j, "field");
    if (!field_json.is_string()) throw UsageError("field \"field\" must be a string");
    auto field = FieldDescriptor::parse(field_json.get<std::string>());
    auto entries = string_list(require(j, "entries"), "entries");
    return RDiagonalForm::parse(field, require_count(j, "n"), entries);
}

LoopNormalForm loop_form_from_json(const Json& j) {
    const auto& field_json = require(j, "field");
    if (!field_json.is_string()) throw UsageError("field \"field\" must be a string");
    LoopNormalForm lnf{FieldDescriptor::parse(field_json.get<std::string>()), require_count(j, "n"), {}, 0};
    i64 h = require_int(j, "hyperbolic_count");
    if (h < 0) throw UsageError("hyperbolic_count must be non-negative");
    lnf.hyperbolic_count = static_cast<int>(h);
    const auto& slots = require(j, "slots");
    if (!slots.is_array()) throw UsageError("slots must be an array");
    for (const auto& slot : slots) {
        VariableSubset mask = subset_from_json(require(slot, "subset"), lnf.n);
        std::vector<SquareClassKey> keys;
        for (const auto& text : string_list(require(slot, "form"), "form"))
            keys.push_back(square_class(lnf.field, FieldScalar::parse(lnf.field, text)));
        KDiagonalForm form(lnf.field, std::move(keys));
        if (lnf.slots.count(mask)) throw UsageError("duplicate slot subset");
        if (form.dim() > 0) lnf.slots.emplace(mask, std::move(form));
    }
    return lnf;
}

BrauerMatrix matrix_from_json(const Json& j) {
    if (j.is_object() && (j.contains("factors") || j.contains("s0"))) return brauer_matrix(descriptor_from_json(j));
    const Json& rows = j.is_object() ? require(j, "matrix") : j;
    if (!rows.is_array()) throw UsageError("matrix must be an array of rows");
    const std::size_t n = rows.size();
    if (j.is_object() && j.contains("n") && require_count(j, "n") != n) throw UsageError("\"n\" disagrees with the matrix size");
    std::vector<QZ> entries;
    for (const auto& row : rows) {
        auto cells = string_list(row, "matrix row");
        if (cells.size() != n) throw UsageError("matrix must be square");
        for (const auto& c : cells) entries.push_back(QZ::parse(c));
    }
    return {n, std::move(entries)};
}

ToralDescriptor descriptor_from_json(const Json& j) {
    if (!j.is_object()) throw UsageError("descriptor must be an object");
    ToralDescriptor t;
    t.s0 = require_int(j, "s0");
    const auto& factors = j.contains("factors") ? j.at("factors") : Json::array();
    if (!factors.is_array()) throw UsageError("factors must be an array");
    for (const auto& f : factors) {
        SymbolFactor s;
        s.s = require_int(f, "s");
        s.r = require_int(f, "r");
        s.i = require_count(f, "i");
        s.j = require_count(f, "j");
        t.factors.push_back(s);
    }
    t.m = j.contains("m") ? require_count(j, "m") : t.factors.size();
    t.n = j.contains("n") ? require_count(j, "n") : 2 * t.m;
    if (j.contains("d")) {
        t.d = require_int(j, "d");
    } else {
        t.d = t.s0;
        for (const auto& f : t.factors) t.d *= f.s;
    }
    t.validate();
    return t;
}

IntMatrix int_matrix_from_json(const Json& j) {
    if (!j.is_array()) throw UsageError("integer matrix must be an array of rows");
    const std::size_t n = j.size();
    std::vector<i64> entries;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != n) throw UsageError("integer matrix must be square");
        for (const auto& x : row) {
            if (!x.is_number_integer()) throw UsageError("integer matrix entries must be integers");
            entries.push_back(x.get<i64>());
        }
    }
    return {n, std::move(entries)};
}

// ---------------------------------------------------------------------------
// Command dispatch

namespace {

struct Options {
    std::string format = "json";
    unsigned jobs = 1;
    std::optional<std::string> field;
    std::optional<std::size_t> n;
    std::size_t at = 0;
    std::size_t dim = 0;
    i64 degree = 0;
    std::size_t vars = 0;
    std::optional<std::size_t> budget;
    std::vector<std::string> payloads;
};

struct Result {
    Json payload;
    std::vector<std::string> diagnostics;
};

// Accepts a full form object, a loop normal form, or a bare entry list that
// takes its field and variable count from the flags.
RDiagonalForm load_form(const Options& o, const std::string& arg) {
    Json j = read_payload(arg);
    if (j.is_array()) {
        if (!o.field || !o.n) throw UsageError("a bare entry list needs --field and --n");
        j = Json{{"field", *o.field}, {"n", *o.n}, {"entries", j}};
    } else if (j.is_object()) {
        if (o.field) {
            if (j.contains("field") && j["field"] != *o.field) throw UsageError("--field disagrees with the payload");
            j["field"] = *o.field;
        }
        if (o.n) {
            if (j.contains("n") && j["n"] != *o.n) throw UsageError("--n disagrees with the payload");
            j["n"] = *o.n;
        }
    }
    return form_from_json(j);
}

const char* kSubsetNote = "loop slots are indexed by subsets of the variables t1..tn";

Result qf_normalize(const Options& o) {
    auto lnf = loop_normal_form(load_form(o, o.payloads.at(0)));
    Json payload = to_json(lnf);
    payload["diagonal"] = to_json(lnf.to_diagonal())["entries"];
    return {payload, {kSubsetNote}};
}

Result qf_isometric(const Options& o) {
    auto a = load_form(o, o.payloads.at(0));
    auto b = load_form(o, o.payloads.at(1));
    Result r{Json{{"isometric", is_isometric_r(a, b)}}, {}};
    if (a.dim() != b.dim()) r.diagnostics.push_back("dimensions differ");
    return r;
}

Result qf_witt(const Options& o) {
    auto dec = witt_decompose_f(load_form(o, o.payloads.at(0)));
    return {Json{{"kernel", to_json(dec.kernel)}, {"witt_index", dec.witt_index}}, {}};
}

Result qf_residue(const Options& o) {
    auto q = load_form(o, o.payloads.at(0));
    auto res = second_residue(q, o.at);
    auto as_form = [&](const std::vector<MonomialUnit>& units) {
        return to_json(RDiagonalForm(q.field(), q.vars() - 1, units));
    };
    return {Json{{"at", o.at},
                 {"first", as_form(res.first)},
                 {"second", as_form(res.second)},
                 {"unramified", is_unramified_at(q, o.at)}},
            {}};
}

Result qf_count(const Options& o) {
    if (!o.field || !o.n) throw UsageError("qf count needs --field and --n");
    auto k = FieldDescriptor::parse(*o.field);
    auto count = count_loop_classes(k, *o.n, o.dim, o.jobs);
    return {Json{{"field", k.spelling()}, {"n", *o.n}, {"dim", o.dim}, {"count", count}}, {}};
}

Result az_matrix(const Options& o) {
    return {to_json(brauer_matrix(descriptor_from_json(read_payload(o.payloads.at(0))))), {}};
}

Result az_normalize(const Options& o) {
    auto b = matrix_from_json(read_payload(o.payloads.at(0)));
    auto red = skew_normal_form(b);
    return {Json{{"blocks", fractions(red.form.blocks)},
                 {"orders", orders(red.form.orders())},
                 {"rank_zero", red.form.rank_zero},
                 {"index", red.form.index()},
                 {"exponent", b.exponent()},
                 {"normal_matrix", to_json(red.form.matrix())},
                 {"witness", to_json(red.witness)}},
            {}};
}

Result az_division(const Options& o) {
    Json j = read_payload(o.payloads.at(0));
    if (j.is_object() && j.contains("s0") && !j.contains("d")) j["d"] = o.degree;
    if (j.is_object() && j.contains("d") && j["d"] != o.degree) throw UsageError("--degree disagrees with the descriptor");
    auto split = index_and_split(matrix_from_json(j), o.degree);
    return {Json{{"index", split.index}, {"s0", split.s0}, {"division", split.division()}}, {}};
}

Result az_enumerate(const Options& o) {
    auto all = enumerate_toral(o.degree, o.vars, o.jobs);
    Json list = Json::array();
    for (const auto& t : all) list.push_back(to_json(t));
    return {Json{{"d", o.degree}, {"n", o.vars}, {"count", all.size()}, {"descriptors", list}},
            {"descriptors are not deduplicated up to GL_n(Z)-orbits; use az equivalent"}};
}

std::size_t default_budget() {
    if (const char* env = std::getenv("TORAL_ORBIT_BUDGET")) {
        try {
            return static_cast<std::size_t>(std::stoull(env));
        } catch (const std::exception&) {
            throw UsageError("TORAL_ORBIT_BUDGET is not a number");
        }
    }
    return kDefaultOrbitBudget;
}

Result az_equivalent(const Options& o) {
    auto a = matrix_from_json(read_payload(o.payloads.at(0)));
    auto b = matrix_from_json(read_payload(o.payloads.at(1)));
    const std::size_t budget = o.budget.value_or(default_budget());
    auto v = orbit_equivalent(a, b, budget);
    Json payload;
    switch (v.kind) {
    case VerdictKind::Equivalent:
        payload = Json{{"verdict", "equivalent"}, {"witness", to_json(*v.witness)}};
        break;
    case VerdictKind::Distinct: payload = Json{{"verdict", "distinct"}, {"invariant", v.invariant}}; break;
    case VerdictKind::Unknown: payload = Json{{"verdict", "unknown"}}; break;
    }
    payload["visited"] = v.visited;
    payload["budget"] = budget;
    return {payload, {}};
}

Result az_tensor(const Options& o) {
    auto a = matrix_from_json(read_payload(o.payloads.at(0)));
    auto b = matrix_from_json(read_payload(o.payloads.at(1)));
    return {to_json(tensor(a, b)), {}};
}

Result az_ramification(const Options& o) {
    auto b = matrix_from_json(read_payload(o.payloads.at(0)));
    auto row = ramification_row(b, o.at);
    bool unramified = std::all_of(row.begin(), row.end(), [](QZ q) { return q.is_zero(); });
    return {Json{{"at", o.at}, {"row", fractions(row)}, {"unramified", unramified}}, {}};
}

std::string render_table(const Json& result) {
    std::ostringstream os;
    os << "status: " << result["status"].get<std::string>() << '\n';
    const auto& payload = result.contains("payload") ? result["payload"] : result;
    for (const auto& [key, value] : payload.items()) {
        if (key == "status") continue;
        os << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
    if (result.contains("diagnostics"))
        for (const auto& d : result["diagnostics"]) os << "note: " << d.get<std::string>() << '\n';
    return os.str();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Loop normal forms of quadratic forms and toral Azumaya algebras over Laurent polynomial rings",
                 "toral"};
    app.require_subcommand(1);
    app.add_option("--format", o.format, "Output mode")->check(CLI::IsMember({"json", "table"}));
    app.add_option("--jobs", o.jobs, "Worker threads for enumerate/count")->check(CLI::PositiveNumber);

    using Handler = Result (*)(const Options&);
    Handler handler = nullptr;
    auto leaf = [&](CLI::App* parent, const char* name, const char* help, Handler h, int payloads) {
        auto* sub = parent->add_subcommand(name, help);
        if (payloads > 0) sub->add_option("payload", o.payloads, "Inline JSON or a file path")->required()->expected(payloads)->allow_extra_args(false);
        sub->callback([&handler, h] { handler = h; });
        return sub;
    };
    auto add_form_flags = [&](CLI::App* sub) {
        sub->add_option("--field", o.field, "Base field: Fq:<q>, Q or R");
        sub->add_option("--n", o.n, "Number of Laurent variables");
    };

    auto* qf = app.add_subcommand("qf", "Quadratic forms over R_n")->require_subcommand(1);
    add_form_flags(leaf(qf, "normalize", "Loop normal form", qf_normalize, 1));
    add_form_flags(leaf(qf, "isometric", "Isometry over R_n of two diagonal forms", qf_isometric, 2));
    add_form_flags(leaf(qf, "witt", "Witt decomposition over F_n", qf_witt, 1));
    auto* residue = leaf(qf, "residue", "Residue split at t_i", qf_residue, 1);
    add_form_flags(residue);
    residue->add_option("--at", o.at, "Variable index i")->required();
    auto* count = leaf(qf, "count", "Number of loop classes of dimension d", qf_count, 0);
    add_form_flags(count);
    count->add_option("--dim", o.dim, "Total dimension d")->required();

    auto* az = app.add_subcommand("az", "Toral Azumaya algebras over R_n")->require_subcommand(1);
    leaf(az, "matrix", "Brauer matrix of a descriptor", az_matrix, 1);
    leaf(az, "normalize", "Alternating normal form with witness", az_normalize, 1);
    leaf(az, "division", "Index and split factor s0", az_division, 1)
        ->add_option("--degree", o.degree, "Degree d")
        ->required();
    auto* enumerate = leaf(az, "enumerate", "All toral descriptors of degree d", az_enumerate, 0);
    enumerate->add_option("--degree", o.degree, "Degree d")->required()->check(CLI::PositiveNumber);
    enumerate->add_option("--vars", o.vars, "Number of variables n")->required();
    leaf(az, "equivalent", "GL_n(Z)-orbit equivalence", az_equivalent, 2)
        ->add_option("--budget", o.budget, "Search budget in visited matrices");
    leaf(az, "tensor", "Tensor product of classes", az_tensor, 2);
    leaf(az, "ramification", "Ramification row at t_i", az_ramification, 1)
        ->add_option("--at", o.at, "Variable index i")
        ->required();

    std::vector<std::string> argv_storage{"toral"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    }

    Json result;
    int status = kOk;
    try {
        Result r = handler(o);
        result = Json{{"status", "ok"}, {"payload", std::move(r.payload)}, {"diagnostics", r.diagnostics}};
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::InvalidField) {
            err << "usage error: " << e.what() << '\n';
            return kUsageError;
        }
        result = Json{{"status", "error"}, {"error", std::string(e.name())}, {"message", e.what()}};
        status = kDomainError;
    }
    out << (o.format == "table" ? render_table(result) : result.dump() + "\n");
    return status;
}

} // namespace toral::cli
