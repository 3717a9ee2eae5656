// idemx command-line front end.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "idemx/campaign.hpp"
#include "idemx/error.hpp"
#include "idemx/extenders.hpp"
#include "idemx/functionals.hpp"
#include "idemx/instance_io.hpp"
#include "idemx/setmaps.hpp"

using namespace idemx;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

struct Loaded {
    json raw;
    InstanceBundle bundle;
};

Loaded load(const std::string& path) {
    Loaded l;
    l.raw = read_json_file(path);
    l.bundle = bundle_from_json(l.raw);
    return l;
}

const FiniteTopSpace& functional_space(const InstanceBundle& b) {
    if (b.embedding) {
        return b.embedding->subspace();
    }
    if (!b.space) {
        throw Error(Errc::parse_error, "instance has no points", "points");
    }
    return *b.space;
}

const Functional& need_functional(const InstanceBundle& b) {
    if (!b.functional) {
        throw Error(Errc::parse_error, "instance has no functional", "kind");
    }
    return *b.functional;
}

const SubspaceEmbedding& need_embedding(const InstanceBundle& b) {
    if (!b.embedding) {
        throw Error(Errc::parse_error, "instance has no subspace", "subspace");
    }
    return *b.embedding;
}

json witness_json(const AxiomWitness& w) {
    json j{{"f", w.f}, {"lhs", w.lhs}, {"rhs", w.rhs}};
    if (w.g) {
        j["g"] = *w.g;
    }
    if (w.c) {
        j["c"] = *w.c;
    }
    return j;
}

json axiom_json(const AxiomReport& r) {
    json j{{"axiom", to_string(r.axiom)}, {"pass", r.pass}, {"cases", r.cases}};
    if (r.witness) {
        j["witness"] = witness_json(*r.witness);
    }
    return j;
}

SetValuedMap extender_map(const InstanceBundle& b) {
    if (!b.map) {
        throw Error(Errc::parse_error, "instance has no map", "map");
    }
    return *b.map;
}

int run_replay(const std::string& path, double tol) {
    const json doc = read_json_file(path);
    std::vector<json> witnesses;
    if (doc.contains("suites")) {
        for (const auto& s : doc.at("suites")) {
            for (const auto& w : s.value("witnesses", json::array())) {
                witnesses.push_back(w);
            }
        }
    } else if (doc.is_array()) {
        witnesses.assign(doc.begin(), doc.end());
    } else {
        witnesses.push_back(doc);
    }
    bool any_fail = false;
    json out = json::array();
    for (const auto& w : witnesses) {
        const auto suite = w.at("suite").get<std::string>();
        const auto seed = w.at("seed").get<std::uint64_t>();
        const CaseVerdict v = replay_case(suite, w.at("instance"), seed, tol);
        any_fail = any_fail || !v.pass;
        out.push_back(json{{"suite", suite}, {"seed", seed}, {"pass", v.pass}, {"detail", v.detail}});
    }
    emit(out);
    return any_fail ? kFail : kPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"idemx: finite-model checks for functional extenders and set-valued retractions"};
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    double tol = 1e-9;
    std::size_t budget = 64;
    std::string instance;

    auto* axioms_cmd = app.add_subcommand("check-axioms", "Check axioms of a functional");
    std::vector<std::string> axiom_names;
    std::size_t trials = 1000;
    axioms_cmd->add_option("instance", instance, "functional JSON")->required();
    axioms_cmd->add_option("--axiom", axiom_names, "axiom to check (default: all)");
    axioms_cmd->add_option("--trials", trials, "random trials per axiom");

    auto* support_cmd = app.add_subcommand("support", "Compute the support of a functional");
    support_cmd->add_option("instance", instance, "functional JSON")->required();

    auto* classify_cmd = app.add_subcommand("classify", "Classify a functional");
    classify_cmd->add_option("instance", instance, "functional JSON")->required();

    auto* extend_cmd = app.add_subcommand("extend", "Apply the extender of a retraction to f");
    extend_cmd->add_option("instance", instance, "embedding + map + f JSON")->required();

    auto* recover_cmd = app.add_subcommand("recover", "Recover a retraction from its extender");
    std::string method = "e";
    std::string variant = "max_usc";
    recover_cmd->add_option("instance", instance, "embedding + map JSON")->required();
    recover_cmd->add_option("--method", method, "e or supports")
        ->check(CLI::IsMember({"e", "supports"}));
    recover_cmd->add_option("--variant", variant, "max_usc or min_lsc")
        ->check(CLI::IsMember({"max_usc", "min_lsc"}));

    auto* search_cmd = app.add_subcommand("search", "Search for a semicontinuous retraction");
    std::string semicontinuity = "usc";
    search_cmd->add_option("instance", instance, "embedding JSON")->required();
    search_cmd->add_option("--semicontinuity", semicontinuity, "usc, lsc or continuous")
        ->check(CLI::IsMember({"usc", "lsc", "continuous"}));

    auto* campaign_cmd = app.add_subcommand("campaign", "Run property suites");
    std::vector<std::string> suites;
    std::vector<std::string> caps;
    std::string out_path;
    std::string format = "json";
    bool all_suites = false;
    std::string suite_help = "suite name (repeatable):";
    for (const auto& name : suite_names()) {
        suite_help += " " + name;
    }
    campaign_cmd->add_option("--suite", suites, suite_help);
    campaign_cmd->add_flag("--all", all_suites, "run every suite");
    campaign_cmd->add_option("--cap", caps, "size cap k=v (repeatable)");
    campaign_cmd->add_option("--out", out_path, "report path (default: stdout)");
    campaign_cmd->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* replay_cmd = app.add_subcommand("replay", "Replay failure witnesses");
    replay_cmd->add_option("witness", instance, "witness, witness list or report JSON")->required();

    for (auto* cmd : {axioms_cmd, support_cmd, classify_cmd, extend_cmd, recover_cmd, search_cmd,
                      campaign_cmd, replay_cmd}) {
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--tol", tol, "numeric tolerance");
    }
    for (auto* cmd : {support_cmd, classify_cmd, recover_cmd}) {
        cmd->add_option("--budget", budget, "random probes per search");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    SearchOptions opts;
    opts.seed = seed;
    opts.tol = tol;
    opts.budget = budget;

    try {
        if (*axioms_cmd) {
            const Loaded l = load(instance);
            const Functional& mu = need_functional(l.bundle);
            std::vector<Axiom> axioms(kAllAxioms.begin(), kAllAxioms.end());
            if (!axiom_names.empty()) {
                axioms.clear();
                for (const auto& name : axiom_names) {
                    axioms.push_back(parse_axiom(name));
                }
            }
            json reports = json::array();
            bool all = true;
            for (Axiom a : axioms) {
                const AxiomReport r = check_axiom(mu, a, trials, tol, seed);
                all = all && r.pass;
                reports.push_back(axiom_json(r));
            }
            emit(json{{"functional", mu.label()}, {"axioms", reports}});
            return all ? kPass : kFail;
        }
        if (*support_cmd) {
            const Loaded l = load(instance);
            const auto& space = functional_space(l.bundle);
            const Mask s = support(need_functional(l.bundle), space, opts);
            emit(json{{"support", subset_to_json(s, space)}});
            return kPass;
        }
        if (*classify_cmd) {
            const Loaded l = load(instance);
            const auto& space = functional_space(l.bundle);
            const Classification c = classify(need_functional(l.bundle), opts);
            json j{{"class", to_string(c.cls)}, {"also_r_max", c.also_r_max}};
            if (c.support) {
                j["support"] = subset_to_json(*c.support, space);
            }
            if (c.density) {
                json lam = json::object();
                for (std::size_t i = 0; i < space.size(); ++i) {
                    const auto& w = c.density->lambda()[i];
                    lam[space.name(i)] = w.is_bottom() ? json("-inf") : json(w.value());
                }
                j["lambda"] = lam;
            }
            json evidence = json::array();
            for (const auto& r : c.evidence) {
                evidence.push_back(axiom_json(r));
            }
            j["evidence"] = evidence;
            emit(j);
            return kPass;
        }
        if (*extend_cmd) {
            const Loaded l = load(instance);
            const auto& e = need_embedding(l.bundle);
            if (!l.bundle.f) {
                throw Error(Errc::parse_error, "instance has no function", "f");
            }
            const Extender u = build_extender(extender_map(l.bundle), e,
                                              l.bundle.kind.value_or(Extremum::min));
            const RealFunction g = u(*l.bundle.f);
            const FunctionClassReport fc = function_class(g, e.ambient());
            emit(json{{"u(f)", function_to_json(g, e.ambient())}, {"class", to_string(fc.cls)}});
            return kPass;
        }
        if (*recover_cmd) {
            const Loaded l = load(instance);
            const auto& e = need_embedding(l.bundle);
            const SetValuedMap r = extender_map(l.bundle);
            const EVariant v = variant == "max_usc" ? EVariant::max_usc : EVariant::min_lsc;
            const Extremum kind = l.bundle.kind.value_or(
                v == EVariant::max_usc ? Extremum::max : Extremum::min);
            const Extender u = build_extender(r, e, kind);
            const SetValuedMap back =
                method == "e" ? recover_retraction_via_e(u, v, opts) : supports_retraction(u, opts);
            const bool same = back == r;
            emit(json{{"recovered", map_to_json(back)}, {"matches_input", same}});
            return same ? kPass : kFail;
        }
        if (*search_cmd) {
            const Loaded l = load(instance);
            const auto& e = need_embedding(l.bundle);
            const Semicontinuity sc = semicontinuity == "usc"   ? Semicontinuity::usc
                                      : semicontinuity == "lsc" ? Semicontinuity::lsc
                                                                : Semicontinuity::continuous;
            const auto r = search_retraction(e, sc);
            emit(json{{"semicontinuity", semicontinuity},
                      {"retraction", r ? map_to_json(*r) : json(nullptr)}});
            return kPass;
        }
        if (*campaign_cmd) {
            CampaignConfig cfg;
            cfg.seed = seed;
            cfg.tol = tol;
            cfg.suites = all_suites ? suite_names() : suites;
            cfg.format = format == "csv" ? ReportFormat::csv : ReportFormat::json;
            for (const auto& c : caps) {
                const auto eq = c.find('=');
                if (eq == std::string::npos) {
                    throw Error(Errc::parse_error, "cap must look like key=value", "cap");
                }
                try {
                    cfg.size_caps[c.substr(0, eq)] = std::stoll(c.substr(eq + 1));
                } catch (const std::exception&) {
                    throw Error(Errc::parse_error, "cap value must be an integer", "cap");
                }
            }
            if (!out_path.empty()) {
                cfg.output = out_path;
            }
            const CampaignReport report = run_campaign(cfg);
            if (out_path.empty()) {
                if (cfg.format == ReportFormat::csv) {
                    std::cout << to_csv(report);
                } else {
                    emit(to_json(report));
                }
            }
            std::cerr << summary(report);
            return report.failed() == 0 ? kPass : kFail;
        }
        if (*replay_cmd) {
            return run_replay(instance, tol);
        }
    } catch (const Error& e) {
        std::cerr << json{{"error", to_string(e.code())}, {"field", e.field()}, {"message", e.what()}}
                         .dump()
                  << '\n';
        switch (e.code()) {
        case Errc::parse_error:
        case Errc::io_error:
        case Errc::unknown_suite:
        case Errc::unknown_axiom:
        case Errc::invariant_violation:
        case Errc::membership_violation:
        case Errc::preorder_violation:
            return kUsage;
        default:
            return kFail;
        }
    }
    return kUsage;
}
