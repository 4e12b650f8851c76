#include "contraction/experiment.hpp"

#include "contraction/bounds.hpp"
#include "contraction/picard.hpp"
#include "contraction/verify.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace contraction {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

// ------------------------------------------------------ JSON helpers

json point_to_json(const Point& p) {
    json arr = json::array();
    for (int i = 0; i < p.size(); ++i) arr.push_back(p[i]);
    return arr;
}

Point point_from_json(const json& doc, int dimension) {
    Point p(dimension);
    if (doc.is_number()) {
        if (dimension != 1) throw ConfigError("scalar point given for dimension > 1");
        p[0] = doc.get<double>();
        return p;
    }
    if (!doc.is_array() || static_cast<int>(doc.size()) != dimension)
        throw ConfigError("point must be an array of length " + std::to_string(dimension));
    for (int i = 0; i < dimension; ++i) p[i] = doc[static_cast<std::size_t>(i)].get<double>();
    return p;
}

double bound_from_json(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    if (v.is_null()) return kInf;
    throw ConfigError("box bound must be a number, \"inf\", \"-inf\", or null");
}

Box box_from_json(const json& doc, int dimension) {
    if (!doc.is_array() || static_cast<int>(doc.size()) != dimension)
        throw ConfigError("box must be an array of [lo, hi] pairs, one per coordinate");
    Box box;
    box.lo.resize(dimension);
    box.hi.resize(dimension);
    for (int i = 0; i < dimension; ++i) {
        const json& side = doc[static_cast<std::size_t>(i)];
        if (!side.is_array() || side.size() != 2) throw ConfigError("box entry must be [lo, hi]");
        box.lo[i] = bound_from_json(side[0]);
        box.hi[i] = side[1].is_null() ? kInf : bound_from_json(side[1]);
        if (side[0].is_null()) box.lo[i] = -kInf;
    }
    return box;
}

json box_to_json(const Box& box) {
    json arr = json::array();
    for (int i = 0; i < box.dimension(); ++i) {
        json side = json::array();
        side.push_back(std::isfinite(box.lo[i]) ? json(box.lo[i]) : json(box.lo[i] > 0 ? "inf" : "-inf"));
        side.push_back(std::isfinite(box.hi[i]) ? json(box.hi[i]) : json(box.hi[i] > 0 ? "inf" : "-inf"));
        arr.push_back(side);
    }
    return arr;
}

json certificate_to_json(const Certificate& cert) {
    return json{{"delta", cert.delta},
                {"r", cert.r},
                {"sample_size", cert.sample_size},
                {"pairs_checked", cert.pairs_checked},
                {"guard", guard_kind_name(cert.guard)},
                {"delta_ladder", cert.delta_ladder}};
}

json witness_to_json(const Witness& witness) {
    return json{{"pair", json::array({point_to_json(witness.pair.x), point_to_json(witness.pair.y)})},
                {"distances", witness.distances},
                {"note", "falsified on sample"}};
}

json pair_violation_to_json(const PairViolation& v) {
    return json{{"pair", json::array({point_to_json(v.pair.x), point_to_json(v.pair.y)})},
                {"lhs", v.lhs},
                {"rhs", v.rhs}};
}

// --------------------------------------------------- config parsing

const json* find(const json& doc, const char* key) {
    const auto it = doc.find(key);
    return it == doc.end() ? nullptr : &*it;
}

double require_number(const json& doc, const char* key) {
    const json* v = find(doc, key);
    if (!v || !v->is_number()) throw ConfigError(std::string("missing numeric field '") + key + "'");
    return v->get<double>();
}

double number_or(const json& doc, const char* key, double fallback) {
    const json* v = find(doc, key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(std::string("field '") + key + "' must be numeric");
    return v->get<double>();
}

long integer_or(const json& doc, const char* key, long fallback) {
    const json* v = find(doc, key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(std::string("field '") + key + "' must be an integer");
    return v->get<long>();
}

std::string string_or(const json& doc, const char* key, const std::string& fallback) {
    const json* v = find(doc, key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(std::string("field '") + key + "' must be a string");
    return v->get<std::string>();
}

}  // namespace

std::string task_kind_name(TaskKind kind) {
    switch (kind) {
        case TaskKind::Axioms: return "axioms";
        case TaskKind::Classify: return "classify";
        case TaskKind::Iterate: return "iterate";
        case TaskKind::Certify: return "certify";
        case TaskKind::Profile: return "profile";
    }
    return "unknown";
}

TaskKind task_kind_from_name(const std::string& name) {
    if (name == "axioms") return TaskKind::Axioms;
    if (name == "classify") return TaskKind::Classify;
    if (name == "iterate") return TaskKind::Iterate;
    if (name == "certify") return TaskKind::Certify;
    if (name == "profile") return TaskKind::Profile;
    throw ConfigError("unknown task kind '" + name + "'");
}

Instance instance_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("inline instance must be an object");
    Instance inst;
    inst.name = string_or(doc, "name", "inline");
    inst.summary = string_or(doc, "summary", "user-defined instance");

    const json* space_doc = find(doc, "space");
    if (!space_doc) throw ConfigError("inline instance needs a 'space' object");
    BMetricSpace space;
    space.dimension = static_cast<int>(require_number(*space_doc, "dimension"));
    const json* domain = find(*space_doc, "domain");
    if (!domain) throw ConfigError("space needs a 'domain' box");
    space.domain = box_from_json(*domain, space.dimension);
    space.metric = metric_kind_from_name(string_or(*space_doc, "metric", "euclidean"));
    space.power_p = number_or(*space_doc, "power_p", 1.0);
    space.coefficient_s =
        number_or(*space_doc, "coefficient_s", default_coefficient(space.metric, space.power_p));
    try {
        validate_space(space);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    inst.space = space;

    const json* map_doc = find(doc, "map");
    if (!map_doc) throw ConfigError("inline instance needs a 'map'");
    std::vector<std::string> components;
    if (map_doc->is_string()) {
        components.push_back(map_doc->get<std::string>());
    } else if (map_doc->is_array()) {
        for (const json& c : *map_doc) components.push_back(c.get<std::string>());
    } else {
        throw ConfigError("'map' must be an expression string or an array of them");
    }
    try {
        inst.map = SelfMap::parse(space, components);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("map: ") + e.what());
    }

    try {
        if (const json* phi = find(doc, "phi")) inst.phi = ControlFunction::parse(phi->get<std::string>());
        if (const json* seq = find(doc, "phi_seq")) {
            const std::string family = seq->at("family").get<std::string>();
            const std::string limit = seq->at("limit").get<std::string>();
            std::optional<std::string> rule;
            if (const json* r = find(*seq, "subsequence")) rule = r->get<std::string>();
            inst.phi_seq = ControlSequence::parse(
                family, limit, rule ? std::optional<std::string_view>(*rule) : std::nullopt);
        }
    } catch (const ParseError& e) {
        throw ConfigError(std::string("control expression: ") + e.what());
    }
    if (const json* q = find(doc, "banach_q")) inst.banach_q = q->get<double>();

    if (const json* classes = find(doc, "classes")) {
        for (const json& c : *classes)
            inst.classes_to_test.push_back(contraction_class_from_name(c.get<std::string>()));
    } else {
        inst.classes_to_test = all_contraction_classes();
    }

    inst.sample_region = space.domain;
    if (const json* region = find(doc, "sample_region"))
        inst.sample_region = box_from_json(*region, space.dimension);

    if (const json* truth = find(doc, "ground_truth")) {
        if (const json* fp = find(*truth, "fixed_point")) {
            if (fp->is_string() && fp->get<std::string>() == "none")
                inst.truth.fixed_point_known_absent = true;
            else if (!fp->is_null())
                inst.truth.fixed_point = point_from_json(*fp, space.dimension);
        }
        if (const json* limit = find(*truth, "picard_limit"))
            if (!limit->is_null()) inst.truth.picard_limit = point_from_json(*limit, space.dimension);
        if (const json* ec = find(*truth, "expected_classes"))
            for (const json& c : *ec)
                inst.truth.expected_classes.insert(contraction_class_from_name(c.get<std::string>()));
        if (const json* nc = find(*truth, "expected_non_classes"))
            for (const json& c : *nc)
                inst.truth.expected_non_classes.insert(contraction_class_from_name(c.get<std::string>()));
        if (const json* ne = find(*truth, "nonexpansive")) inst.truth.expected_nonexpansive = ne->get<bool>();
    }
    return inst;
}

namespace {

void validate_task_params(const Instance& inst, const TaskSpec& task) {
    const json& p = task.params;
    switch (task.kind) {
        case TaskKind::Axioms:
            break;
        case TaskKind::Classify: {
            if (const json* eps = find(p, "epsilons")) {
                if (!eps->is_array() || eps->empty())
                    throw ConfigError("classify.epsilons must be a non-empty array");
                for (const json& e : *eps)
                    if (!e.is_number() || !(e.get<double>() > 0.0))
                        throw ConfigError("classify.epsilons entries must be positive numbers");
            }
            if (const json* lf = find(p, "delta_ladder")) {
                if (!lf->is_array() || lf->empty())
                    throw ConfigError("classify.delta_ladder must be a non-empty array");
                double previous = std::numeric_limits<double>::infinity();
                for (const json& f : *lf) {
                    if (!f.is_number()) throw ConfigError("classify.delta_ladder entries must be numbers");
                    const double v = f.get<double>();
                    if (!(v > 0.0) || !(v < previous))
                        throw ConfigError("classify.delta_ladder must be positive and strictly decreasing");
                    previous = v;
                }
            }
            if (integer_or(p, "r_max", kDefaultRMax) < 1) throw ConfigError("classify.r_max must be >= 1");
            if (integer_or(p, "kirk_n_max", 20) < 1) throw ConfigError("classify.kirk_n_max must be >= 1");
            break;
        }
        case TaskKind::Iterate: {
            if (integer_or(p, "max_iter", kDefaultMaxIter) < 1)
                throw ConfigError("iterate.max_iter must be >= 1");
            if (!(number_or(p, "tol", kDefaultCauchyTol) > 0.0))
                throw ConfigError("iterate.tol must be positive");
            if (const json* x0 = find(p, "x0")) point_from_json(*x0, inst.space.dimension);
            break;
        }
        case TaskKind::Certify: {
            const double eps = require_number(p, "epsilon");
            const double k = require_number(p, "k_radius");
            if (!(0.0 < eps) || !(eps < k)) throw ConfigError("certify requires 0 < epsilon < k_radius");
            const std::string seq = string_or(p, "sequence", "constant");
            if (seq != "constant" && seq != "instance")
                throw ConfigError("certify.sequence must be 'constant' or 'instance'");
            if (!inst.phi) throw ConfigError("certify requires an instance with a control function phi");
            if (seq == "instance" && !inst.phi_seq)
                throw ConfigError("certify.sequence='instance' requires a stored control sequence");
            break;
        }
        case TaskKind::Profile: {
            const double eps = require_number(p, "epsilon");
            const double k = require_number(p, "k_radius");
            if (!(0.0 < eps) || !(eps < k)) throw ConfigError("profile requires 0 < epsilon < k_radius");
            break;
        }
    }
}

// -------------------------------------------------------- task bodies

json run_axioms_task(const Instance& inst, const SampleSpec& spec, const json&) {
    const AxiomReport report = check_metric_axioms(inst.space, spec);
    json result{{"non_negativity", report.non_negativity},
                {"symmetry", report.symmetry},
                {"zero_iff_equal", report.zero_iff_equal},
                {"b_triangle", report.b_triangle},
                {"pass", report.all_pass()},
                {"triples_checked", report.triples_checked},
                {"coefficient_s", report.coefficient_s}};
    if (report.first_violation) {
        json tuple = json::array();
        for (const Point& p : report.first_violation->tuple) tuple.push_back(point_to_json(p));
        result["first_violation"] = json{{"axiom", report.first_violation->axiom},
                                         {"tuple", tuple},
                                         {"lhs", report.first_violation->lhs},
                                         {"rhs", report.first_violation->rhs}};
    }
    return result;
}

json search_record(const Instance& inst, ContractionClass cls, double epsilon,
                   const SelfMap& map, const SampleSpec& spec,
                   std::span<const double> ladder, long r_max, bool* regression) {
    json record{{"instance", inst.name},
                {"class", contraction_class_name(cls)},
                {"epsilon", epsilon}};
    SearchResult result;
    try {
        switch (cls) {
            case ContractionClass::Leader:
                result = search_leader_params(map, epsilon, spec, ladder, r_max);
                break;
            case ContractionClass::MKLeader:
                result = search_mk_leader_params(map, epsilon, spec, ladder, r_max);
                break;
            case ContractionClass::MeirKeeler:
                result = search_meir_keeler_params(map, epsilon, spec, ladder);
                break;
            default:
                throw std::logic_error("not a search class");
        }
    } catch (const VacuousSampleError&) {
        record["outcome"] = "vacuous";
        record["payload"] = json{{"note", "no sampled pair satisfies any guard"}};
        return record;
    }
    if (result.certificate) {
        record["outcome"] = "certificate";
        record["payload"] = certificate_to_json(*result.certificate);
        if (inst.truth.expected_non_classes.count(cls)) *regression = true;
    } else {
        record["outcome"] = "witness";
        record["payload"] = witness_to_json(*result.witness);
        if (inst.truth.expected_classes.count(cls)) *regression = true;
    }
    return record;
}

json run_classify_task(const Instance& inst, const SampleSpec& spec, const json& params,
                       bool* regression) {
    std::vector<double> epsilons;
    if (const json* eps = find(params, "epsilons")) {
        for (const json& e : *eps) epsilons.push_back(e.get<double>());
    } else {
        epsilons = standard_epsilon_grid(inst.space);
    }
    const long r_max = integer_or(params, "r_max", kDefaultRMax);
    const long kirk_n_max = integer_or(params, "kirk_n_max", 20);
    std::vector<double> ladder_factors{1.0, 0.5, 0.1, 0.05, 0.01, 0.001};
    if (const json* lf = find(params, "delta_ladder")) {
        ladder_factors.clear();
        for (const json& f : *lf) ladder_factors.push_back(f.get<double>());
    }

    const std::vector<PointPair> pairs = sample_pairs(inst.space, spec);
    json records = json::array();

    auto leq_record = [&](ContractionClass cls, const CheckReport& report, json extra) {
        json record{{"instance", inst.name},
                    {"class", contraction_class_name(cls)},
                    {"outcome", report.pass ? "pass" : "witness"},
                    {"pairs_checked", report.pairs_checked}};
        if (!extra.is_null()) record["params"] = std::move(extra);
        if (report.witness) record["payload"] = pair_violation_to_json(*report.witness);
        if (report.pass && inst.truth.expected_non_classes.count(cls)) *regression = true;
        if (!report.pass && inst.truth.expected_classes.count(cls)) *regression = true;
        records.push_back(std::move(record));
    };

    for (ContractionClass cls : inst.classes_to_test) {
        switch (cls) {
            case ContractionClass::Banach: {
                if (!inst.banach_q) break;
                leq_record(cls, check_banach(inst.map, *inst.banach_q, pairs), json{{"q", *inst.banach_q}});
                break;
            }
            case ContractionClass::BoydWong: {
                if (!inst.phi) break;
                leq_record(cls, check_boyd_wong(inst.map, *inst.phi, pairs), json());
                break;
            }
            case ContractionClass::Kirk: {
                if (!inst.phi_seq) break;
                const KirkReport report = check_kirk_asymptotic(inst.map, *inst.phi_seq, pairs, kirk_n_max);
                json record{{"instance", inst.name},
                            {"class", contraction_class_name(cls)},
                            {"outcome", report.pass ? "pass" : "witness"},
                            {"pairs_checked", report.pairs_checked},
                            {"params", json{{"n_max", report.n_max}}}};
                if (report.witness)
                    record["payload"] = json{{"n", report.witness->n},
                                             {"violation", pair_violation_to_json(report.witness->violation)}};
                if (report.pass && inst.truth.expected_non_classes.count(cls)) *regression = true;
                if (!report.pass && inst.truth.expected_classes.count(cls)) *regression = true;
                records.push_back(std::move(record));
                break;
            }
            case ContractionClass::MeirKeeler:
            case ContractionClass::MKLeader:
            case ContractionClass::Leader: {
                for (double eps : epsilons) {
                    std::vector<double> ladder;
                    for (double f : ladder_factors) ladder.push_back(f * eps);
                    records.push_back(search_record(inst, cls, eps, inst.map, spec, ladder, r_max, regression));
                }
                break;
            }
        }
    }

    const CheckReport nonexp = check_nonexpansive(inst.map, pairs);
    json nonexp_record{{"instance", inst.name},
                       {"check", "nonexpansive"},
                       {"outcome", nonexp.pass ? "pass" : "witness"},
                       {"pairs_checked", nonexp.pairs_checked}};
    if (nonexp.witness) nonexp_record["payload"] = pair_violation_to_json(*nonexp.witness);
    if (inst.truth.expected_nonexpansive && nonexp.pass != *inst.truth.expected_nonexpansive)
        *regression = true;

    return json{{"records", std::move(records)},
                {"nonexpansive", std::move(nonexp_record)},
                {"epsilons", epsilons},
                {"r_max", r_max}};
}

json run_iterate_task(const Instance& inst, const SampleSpec& spec, const json& params,
                      std::string* csv_out) {
    Point x0;
    if (const json* x = find(params, "x0")) {
        x0 = point_from_json(*x, inst.space.dimension);
    } else {
        // default start: center of the sample region
        x0 = 0.5 * (inst.sample_region.lo + inst.sample_region.hi);
    }
    const long max_iter = integer_or(params, "max_iter", kDefaultMaxIter);
    const double tol = number_or(params, "tol", kDefaultCauchyTol);

    json result;
    try {
        const IterateResult it = iterate(inst.map, x0, max_iter, tol);
        result["converged"] = it.report.converged;
        result["iterations_used"] = it.report.iterations_used;
        result["cauchy_tol"] = it.report.cauchy_tol;
        result["orbit_diameter"] = it.report.orbit_diameter;
        result["unbounded_suspect"] = it.report.unbounded_suspect;
        result["complete_graph"] = "not machine-checkable";
        if (it.report.limit_estimate) {
            result["limit_estimate"] = point_to_json(*it.report.limit_estimate);
            result["residual_at_estimate"] = *it.report.residual;
        }

        // Residual against the known Picard limit, when the registry
        // records one; this is the authoritative fixed-point verdict.
        double residual = it.report.residual.value_or(kInf);
        if (inst.truth.picard_limit) {
            const Point& reference = *inst.truth.picard_limit;
            residual = fixed_point_residual(inst.map, reference);
            result["reference_limit"] = point_to_json(reference);
            result["residual"] = residual;
            if (it.report.limit_estimate)
                result["distance_estimate_to_reference"] =
                    distance(inst.space, *it.report.limit_estimate, reference);
        } else if (it.report.residual) {
            result["residual"] = *it.report.residual;
        }
        const bool certified = it.report.converged && residual <= kFixedPointResidualTol;
        result["fixed_point_certified"] = certified;
        if (it.report.converged && !certified) result["flag"] = "limit is not a fixed point";

        if (csv_out) {
            std::ostringstream os;
            std::optional<Point> z = inst.truth.picard_limit;
            if (!z && it.report.limit_estimate) z = it.report.limit_estimate;
            write_orbit_csv(os, inst.space, it.orbit, z);
            *csv_out = os.str();
        }
        (void)spec;
    } catch (const OrbitEscape& e) {
        result["error"] = e.what();
        result["escape_index"] = e.index();
    }
    return result;
}

json retract_bound_to_json(const RetractBound& bound) {
    return json{{"epsilon", bound.epsilon},
                {"k_radius", bound.k_radius},
                {"f_min", bound.f_min},
                {"delta", bound.delta},
                {"m1", bound.m1},
                {"m2", bound.m2},
                {"s", bound.s},
                {"p", bound.p},
                {"m", bound.m},
                {"derivation", "proof-schema"},
                {"gap", json{{"a", bound.gap.a},
                             {"b", bound.gap.b},
                             {"argmin", bound.gap.argmin_estimate},
                             {"grid_resolution", bound.gap.grid_resolution},
                             {"initial_grid", bound.gap.initial_grid},
                             {"refine_rounds", bound.gap.refine_rounds}}},
                {"uniform_n_max", bound.uniform_n_max}};
}

Point certified_limit(const Instance& inst) {
    if (inst.truth.fixed_point) return *inst.truth.fixed_point;
    if (inst.truth.fixed_point_known_absent)
        throw std::runtime_error("instance has no fixed point; nothing to certify against");
    // Estimate one by iteration from the sample-region center.
    const Point x0 = 0.5 * (inst.sample_region.lo + inst.sample_region.hi);
    const IterateResult it = iterate(inst.map, x0);
    if (!it.report.converged || !it.report.limit_estimate)
        throw std::runtime_error("could not estimate a fixed point by iteration");
    return *it.report.limit_estimate;
}

json run_certify_task(const Instance& inst, const SampleSpec& spec, const json& params) {
    const double epsilon = require_number(params, "epsilon");
    const double k_radius = require_number(params, "k_radius");
    const long n_max = integer_or(params, "n_max", kDefaultUniformNMax);
    const long count = integer_or(params, "sample_count", 1000);
    const std::string seq_mode = string_or(params, "sequence", "constant");

    const ControlFunction& phi = *inst.phi;
    const ControlSequence seq =
        seq_mode == "instance" ? *inst.phi_seq : ControlSequence::constant(phi);

    const RetractBound bound = retract_bound(phi, seq, epsilon, k_radius, n_max);
    InvarianceIndex inv;
    inv.epsilon = epsilon;
    inv.index = bound.m2;
    inv.mode = InvarianceMode::Constructive;
    inv.justification = "m2 from the retract construction";

    json result{{"bound", retract_bound_to_json(bound)},
                {"sequence", seq_mode},
                {"invariance", json{{"epsilon", inv.epsilon},
                                    {"index", inv.index},
                                    {"mode", "constructive"}}}};

    const Point z = certified_limit(inst);
    const RetractVerification rv = verify_retract_bound(inst.map, z, bound, spec.seed, count);
    result["verify_retract"] = json{{"pass", rv.pass},
                                    {"worst_entry", rv.worst_entry},
                                    {"not_entered", rv.not_entered},
                                    {"samples", rv.samples}};
    const UniformVerification uv =
        verify_uniform_convergence(inst.map, z, epsilon, k_radius, bound, inv, spec.seed, count);
    result["verify_uniform"] = json{{"pass", uv.pass},
                                    {"composed_bound", uv.composed_bound},
                                    {"cap", uv.cap},
                                    {"samples", uv.samples}};
    result["fixed_point"] = point_to_json(z);
    return result;
}

json run_profile_task(const Instance& inst, const SampleSpec& spec, const json& params) {
    const double epsilon = require_number(params, "epsilon");
    const double k_radius = require_number(params, "k_radius");
    const long count = integer_or(params, "count", 1000);
    const long cap = integer_or(params, "cap", 10000);

    Point z;
    if (inst.truth.picard_limit) z = *inst.truth.picard_limit;
    else z = certified_limit(inst);

    const EntryProfile profile = uniform_entry_profile(inst.map, z, k_radius, epsilon,
                                                       spec.seed, count, cap);
    json histogram = json::array();
    for (const auto& [index, n] : profile.histogram)
        histogram.push_back(json::array({index, n}));
    json result{{"epsilon", epsilon},
                {"k_radius", k_radius},
                {"count", count},
                {"cap", cap},
                {"center", point_to_json(z)},
                {"not_entered", profile.not_entered_count},
                {"histogram", histogram}};
    if (profile.max_entry) result["max_entry"] = *profile.max_entry;
    else result["max_entry"] = "not entered";
    return result;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig config;

    const json* instance = find(doc, "instance");
    if (!instance) throw ConfigError("config needs an 'instance' (name or inline object)");
    config.instance_echo = *instance;
    if (instance->is_string()) {
        try {
            config.instance = get_instance(instance->get<std::string>());
        } catch (const UnknownInstanceError& e) {
            throw ConfigError(e.what());
        }
    } else {
        config.instance = instance_from_json(*instance);
    }

    config.sampling.seed = 42;
    config.sampling.count = 10000;
    config.sampling.region = config.instance.sample_region;
    if (const json* sampling = find(doc, "sampling")) {
        config.sampling.seed = static_cast<std::uint64_t>(integer_or(*sampling, "seed", 42));
        config.sampling.count = integer_or(*sampling, "count", 10000);
        if (const json* region = find(*sampling, "region"))
            config.sampling.region = box_from_json(*region, config.instance.space.dimension);
    }
    if (config.sampling.count < 1) throw ConfigError("sampling.count must be >= 1");
    if (!config.sampling.region.bounded()) throw ConfigError("sampling region must be bounded");
    if (!config.instance.space.domain.contains_box(config.sampling.region))
        throw ConfigError("sampling region must lie inside the instance domain");

    const json* tasks = find(doc, "tasks");
    if (!tasks || !tasks->is_array() || tasks->empty())
        throw ConfigError("config needs a non-empty 'tasks' array");
    for (const json& t : *tasks) {
        TaskSpec task;
        task.kind = task_kind_from_name(t.at("kind").get<std::string>());
        task.params = t;
        task.params.erase("kind");
        validate_task_params(config.instance, task);
        config.tasks.push_back(std::move(task));
    }

    if (const json* output = find(doc, "output")) {
        config.output_format = string_or(*output, "format", "json");
        config.output_path = string_or(*output, "path", "");
        if (config.output_format != "json" && config.output_format != "csv")
            throw ConfigError("output.format must be 'json' or 'csv'");
    }
    if (config.output_format == "csv") {
        long iterate_tasks = 0;
        for (const TaskSpec& t : config.tasks)
            if (t.kind == TaskKind::Iterate) ++iterate_tasks;
        if (iterate_tasks != 1 || config.tasks.size() != 1)
            throw ConfigError("csv output requires exactly one iterate task (orbit export)");
    }
    return config;
}

RunReport run(const ExperimentConfig& config) {
    RunReport report;
    json task_results = json::array();
    json timings = json::array();
    bool regression = false;
    bool task_failed = false;

    for (std::size_t i = 0; i < config.tasks.size(); ++i) {
        const TaskSpec& task = config.tasks[i];
        json entry{{"kind", task_kind_name(task.kind)}, {"params", task.params}};
        const auto started = std::chrono::steady_clock::now();
        try {
            switch (task.kind) {
                case TaskKind::Axioms:
                    entry["result"] = run_axioms_task(config.instance, config.sampling, task.params);
                    break;
                case TaskKind::Classify:
                    entry["result"] =
                        run_classify_task(config.instance, config.sampling, task.params, &regression);
                    break;
                case TaskKind::Iterate: {
                    std::string csv;
                    entry["result"] = run_iterate_task(
                        config.instance, config.sampling, task.params,
                        config.output_format == "csv" ? &csv : nullptr);
                    if (!csv.empty()) report.csv = std::move(csv);
                    break;
                }
                case TaskKind::Certify:
                    entry["result"] = run_certify_task(config.instance, config.sampling, task.params);
                    break;
                case TaskKind::Profile:
                    entry["result"] = run_profile_task(config.instance, config.sampling, task.params);
                    break;
            }
        } catch (const std::exception& e) {
            entry["result"] = json{{"error", e.what()}};
            task_failed = true;
        }
        const auto elapsed = std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - started);
        timings.push_back(json{{"task", i}, {"ms", elapsed.count()}});
        task_results.push_back(std::move(entry));
    }

    report.results = std::move(task_results);
    report.document = json{{"schema_version", kSchemaVersion},
                           {"toolkit_version", kToolkitVersion},
                           {"seed", config.sampling.seed},
                           {"sample_count", config.sampling.count},
                           {"sample_region", box_to_json(config.sampling.region)},
                           {"instance", config.instance_echo},
                           {"coefficient_s", config.instance.space.coefficient_s},
                           {"results", report.results},
                           {"timing", std::move(timings)}};
    report.exit_code = regression || task_failed ? 1 : 0;
    return report;
}

}  // namespace contraction
