#include "jdr/errors.hpp"
#include "jdr/relations.hpp"
#include "jdr/scenarios.hpp"
#include "jdr/textio.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>

namespace {

jdr::Mutations parse_mutation(const std::string& name) {
    jdr::Mutations mut;
    if (name.empty()) return mut;
    if (name == "as-flip") mut.flip_as_sign = true;
    else if (name == "push-flip") mut.flip_push_side = true;
    else if (name == "drop-ld") mut.drop_ld_corrections = true;
    else throw CLI::ValidationError("--mutate", "expected as-flip, push-flip or drop-ld");
    return mut;
}

jdr::ReduceContext make_context(const std::string& kase, const std::string& alpha, const std::string& mode,
                                const jdr::Mutations& mut) {
    jdr::AnnihilatorSpec ann = alpha == "sym" ? jdr::AnnihilatorSpec::cyclic_symbolic()
                                              : jdr::AnnihilatorSpec::cyclic(jdr::rational_from_string(alpha));
    jdr::Mode m = mode == "full" ? jdr::Mode::Full : jdr::Mode::Quotient;
    jdr::ReduceContext ctx;
    if (kase == "cyclic2") ctx = jdr::ReduceContext::cyclic2(ann, m);
    else if (kase == "cyclic3") ctx = jdr::ReduceContext::cyclic3(ann, m);
    else if (kase == "noncyclic3") ctx = jdr::ReduceContext::noncyclic3(m);
    else throw CLI::ValidationError("--case", "expected cyclic2, cyclic3 or noncyclic3");
    ctx.mut = mut;
    return ctx;
}

int run_verify(const std::string& filter, const std::string& format, std::uint64_t seed,
               const std::string& mutate) {
    jdr::VerifyOptions opt;
    opt.filter = filter;
    opt.seed = seed;
    opt.mut = parse_mutation(mutate);
    jdr::SuiteResult suite = jdr::run_suite(opt);
    std::cout << (format == "json" ? jdr::report_json(suite) : jdr::report_text(suite));
    return suite.exit_code;
}

int run_reduce(const std::string& expr, const std::string& kase, const std::string& alpha,
               const std::string& mode, const std::string& mutate) {
    jdr::ReduceContext ctx = make_context(kase, alpha, mode, parse_mutation(mutate));
    jdr::LinCombo input = jdr::parse_lincombo(expr, ctx.registry);
    jdr::LinCombo out = jdr::reduce_combo(input, ctx);
    std::cout << out.to_string(ctx.registry) << '\n';
    return 0;
}

int run_relations(const std::string& kase, const std::string& alpha, const std::string& aut,
                  const std::string& format, const std::string& mutate) {
    jdr::ReduceContext ctx = make_context(kase, alpha, "full", parse_mutation(mutate));
    std::vector<jdr::Relation> rels;
    auto keep = [&aut](const char* family) { return aut.empty() || aut == family; };
    if (kase == "noncyclic3") {
        for (auto& rel : jdr::noncyclic_relations(ctx)) {
            if (!aut.empty() && rel.provenance.rfind(aut, 0) != 0) continue;
            rels.push_back(std::move(rel));
        }
    } else if (kase == "cyclic3") {
        if (keep("t") || keep("holbar")) {
            for (auto& rel : jdr::cyclic3_relations(ctx)) {
                if (!aut.empty()) {
                    const bool is_hol = rel.provenance.rfind("holbar", 0) == 0;
                    if ((aut == "holbar") != is_hol) continue;
                }
                rels.push_back(std::move(rel));
            }
            for (auto& rel : jdr::lemma45_relations(ctx)) {
                if (aut.empty() || aut == "t") rels.push_back(std::move(rel));
            }
        }
    } else { // cyclic2
        jdr::ReduceContext qctx = ctx;
        qctx.mode = jdr::Mode::Quotient;
        const std::vector<std::string> gammas = {"Gamma1", "Gamma2", "Gamma3"};
        if (keep("t")) {
            for (const auto& g : gammas) {
                for (int copy = 1; copy <= 2; ++copy) {
                    for (int dir : {1, -1}) {
                        auto rel = jdr::apply_aut(g, jdr::AutSpec::aut_t(copy, dir), qctx);
                        if (!rel.trivial()) rels.push_back(std::move(rel));
                    }
                }
            }
        }
        if (keep("holbar")) {
            for (const auto& g : gammas) {
                for (int tripod : {0, 1}) {
                    auto rel = jdr::apply_aut(g, jdr::AutSpec::holbar(tripod), qctx);
                    if (!rel.trivial()) rels.push_back(std::move(rel));
                }
            }
        }
        if (keep("lambda")) {
            jdr::ReduceContext lctx =
                jdr::ReduceContext::cyclic2(jdr::AnnihilatorSpec::cyclic(jdr::Rational(1)), jdr::Mode::Quotient, true);
            lctx.mut = ctx.mut;
            for (const auto& g : gammas) rels.push_back(jdr::lambda_relation(g, lctx));
        }
        if (keep("chi")) {
            jdr::ReduceContext cctx =
                jdr::ReduceContext::cyclic2(jdr::AnnihilatorSpec::cyclic(jdr::Rational(1)), jdr::Mode::Quotient);
            cctx.mut = ctx.mut;
            for (const auto& [a, b] : jdr::chi_constraint_samples(3)) {
                for (const auto& g : {std::string("Gamma1"), std::string("Gamma2")}) {
                    auto rel = jdr::apply_aut(g, jdr::AutSpec::chi(a, b), cctx);
                    if (!rel.trivial()) rels.push_back(std::move(rel));
                }
            }
        }
    }
    if (format == "json") {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const auto& rel : rels) {
            nlohmann::ordered_json item;
            item["generator"] = rel.generator;
            item["provenance"] = rel.provenance;
            item["relation"] = rel.vec.to_string(ctx.registry);
            doc.push_back(item);
        }
        std::cout << doc.dump(2) << '\n';
    } else {
        for (const auto& rel : rels) {
            std::cout << rel.generator << " [" << rel.provenance << "]: " << rel.vec.to_string(ctx.registry)
                      << " = 0\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jdr - exact verification engine for degree-2 beaded Jacobi diagram spaces"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run the named scenario suite");
    std::string filter, format = "text", mutate;
    std::uint64_t seed = 20240915;
    verify->add_option("--filter", filter, "run only scenarios whose id starts with this prefix");
    verify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    verify->add_option("--seed", seed, "seed for the randomized checks");
    verify->add_option("--mutate", mutate, "negative-control hook: as-flip, push-flip or drop-ld");

    auto* reduce = app.add_subcommand("reduce", "reduce a diagram expression to the essential basis");
    std::string expr, rcase = "cyclic2", ralpha = "sym", rmode = "quotient", rmutate;
    reduce->add_option("expr", expr, "diagram expression, e.g. 2*H[(0,1),(0,2)|(0,1),(0,2)]")->required();
    reduce->add_option("--case", rcase, "cyclic2, cyclic3 or noncyclic3");
    reduce->add_option("--alpha", ralpha, "sym or a rational");
    reduce->add_option("--mode", rmode, "quotient or full")->check(CLI::IsMember({"quotient", "full"}));
    reduce->add_option("--mutate", rmutate, "negative-control hook");

    auto* relations = app.add_subcommand("relations", "print a generated relation family");
    std::string lcase = "cyclic3", lalpha = "sym", laut, lformat = "text", lmutate;
    relations->add_option("--case", lcase, "cyclic2, cyclic3 or noncyclic3");
    relations->add_option("--alpha", lalpha, "sym or a rational");
    relations->add_option("--aut", laut, "t, holbar, lambda, chi, mu, nu or rho");
    relations->add_option("--format", lformat, "text or json")->check(CLI::IsMember({"text", "json"}));
    relations->add_option("--mutate", lmutate, "negative-control hook");

    try {
        app.parse(argc, argv);
        if (verify->parsed()) return run_verify(filter, format, seed, mutate);
        if (reduce->parsed()) return run_reduce(expr, rcase, ralpha, rmode, rmutate);
        if (relations->parsed()) return run_relations(lcase, lalpha, laut, lformat, lmutate);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const jdr::UnknownScenario& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
