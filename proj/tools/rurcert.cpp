// Command-line front end: certify approximate roots of a polynomial system,
// build candidate rational univariate representations, run determinantal
// deflation, or verify a representation exactly.

#include <rurcert/certify.hpp>
#include <rurcert/deflate.hpp>
#include <rurcert/gnewton.hpp>
#include <rurcert/io.hpp>
#include <rurcert/rur.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace rurcert;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Rational parse_rational_arg(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational r(int_from_string(s.substr(0, slash)), int_from_string(s.substr(slash + 1)));
        r.canonicalize();
        return r;
    }
    return rational_from_decimal(s);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

void emit(const nlohmann::json& j, const std::string& format, const std::string& out_path) {
    if (format == "structured") {
        std::string text = j.dump(2);
        if (out_path.empty()) {
            std::cout << text << "\n";
        } else {
            std::ofstream out(out_path);
            out << text << "\n";
        }
    }
}

void print_text_report(const CertificateReport& rep) {
    std::cout << "outcome: " << outcome_name(rep.outcome) << "\n";
    std::cout << "iterations: " << rep.iterations << "\n";
    for (std::size_t k = 0; k < rep.B_history.size(); ++k)
        std::cout << "  k=" << k << "  E=" << rational_to_string(rep.E_history[k])
                  << "  B=" << rep.B_history[k].get_str() << "\n";
    if (rep.certified_rur) std::cout << rur_text(*rep.certified_rur) << "\n";
    for (const auto& line : rep.rur_trace) std::cout << "trace: " << line << "\n";
    for (const auto& note : rep.notes) std::cout << "note: " << note << "\n";
    if (!rep.final_remainders.empty()) {
        std::cout << "final remainders:\n";
        for (const auto& r : rep.final_remainders) std::cout << "  " << r << "\n";
    }
}

int outcome_exit_code(CertificateReport::Outcome o) {
    switch (o) {
        case CertificateReport::Outcome::Certified: return 0;
        case CertificateReport::Outcome::RefutedByHeightBound: return 10;
        case CertificateReport::Outcome::Inconclusive: return 11;
        case CertificateReport::Outcome::NotAComponent: return 12;
    }
    return 11;
}

ExactRur rur_from_json(nlohmann::json j) {
    // accept both a bare representation object and a full report wrapping it
    if (!j.contains("q") && j.contains("rur")) j = j.at("rur");
    ExactRur rur;
    auto rat = [](const std::string& s) {
        return rational_from_string(s);
    };
    for (const auto& l : j.at("lambda")) rur.lambda.push_back(rat(l.get<std::string>()));
    auto poly = [&](const nlohmann::json& a) {
        std::vector<Rational> c;
        for (const auto& x : a) c.push_back(rat(x.get<std::string>()));
        return UniPoly<Rational>(std::move(c));
    };
    rur.q = poly(j.at("q"));
    for (const auto& a : j.at("v")) rur.v.push_back(poly(a));
    return rur;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified rational univariate representations of polynomial system roots"};
    app.require_subcommand(1);

    std::string system_path, roots_path, rur_path, out_path;
    std::string method = "local", format = "text", mode = "reduced";
    std::string e_override_arg, b_schedule_arg, lambda_arg;
    unsigned precision = kDefaultPrecisionBits, max_iter = 0, threads = 1;
    std::uint64_t seed = 1;
    std::string tolerance_arg;
    bool normalize_u = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--precision", precision, "working precision in bits");
        cmd->add_option("--seed", seed, "seed for randomized choices");
        cmd->add_option("--format", format, "text | structured")
            ->check(CLI::IsMember({"text", "structured"}));
        cmd->add_option("--output", out_path, "structured report file (default stdout)");
        cmd->add_option("--threads", threads, "accepted for compatibility; runs single-threaded");
    };
    auto add_pipeline = [&](CLI::App* cmd) {
        add_common(cmd);
        cmd->add_option("system", system_path, "system file")->required();
        cmd->add_option("roots", roots_path, "root list file")->required();
        cmd->add_option("--max-iter", max_iter, "iteration cap (0 = automatic)");
        cmd->add_option("--method", method, "local | global")
            ->check(CLI::IsMember({"local", "global"}));
        cmd->add_option("--tolerance", tolerance_arg, "candidate residual tolerance");
        cmd->add_option("--e-override", e_override_arg, "comma list of per-step error bounds");
        cmd->add_option("--b-schedule", b_schedule_arg, "comma list of per-step denominators");
        cmd->add_option("--lambda", lambda_arg, "comma list: fixed primitive-form coefficients");
        cmd->add_flag("--normalize-u", normalize_u, "scale the primitive form into [-1,1]");
    };

    auto* certify_cmd = app.add_subcommand("certify", "full certification pipeline");
    add_pipeline(certify_cmd);
    auto* rur_cmd = app.add_subcommand("rur", "build and print the refined representation");
    add_pipeline(rur_cmd);
    auto* deflate_cmd = app.add_subcommand("deflate", "deflation sequences and point partition");
    add_common(deflate_cmd);
    deflate_cmd->add_option("system", system_path, "system file")->required();
    deflate_cmd->add_option("roots", roots_path, "root list file")->required();
    deflate_cmd->add_option("--mode", mode, "reduced | full")
        ->check(CLI::IsMember({"reduced", "full"}));
    auto* verify_cmd = app.add_subcommand("verify", "exact check of a stored representation");
    add_common(verify_cmd);
    verify_cmd->add_option("system", system_path, "system file")->required();
    verify_cmd->add_option("rur", rur_path, "representation file (structured)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        PolySystem sys = parse_system(read_file(system_path));

        if (verify_cmd->parsed()) {
            ExactRur rur = rur_from_json(nlohmann::json::parse(read_file(rur_path)));
            VerifyResult res = verify_rur(sys, rur);
            nlohmann::json j;
            j["ok"] = res.ok;
            if (!res.ok) {
                j["failed_condition"] = res.failed_condition;
                j["witness_index"] = res.witness_index;
            }
            emit(j, format, out_path);
            if (format == "text")
                std::cout << (res.ok ? "verified\n"
                                     : "failed condition " + std::to_string(res.failed_condition) +
                                           "\n");
            return res.ok ? 0 : 12;
        }

        ApproxRootSet roots = parse_roots(read_file(roots_path), precision);

        if (deflate_cmd->parsed()) {
            DeflationMode m = mode == "full" ? DeflationMode::Full : DeflationMode::Reduced;
            double tol = roots.epsilon.get_d();
            nlohmann::json j;
            j["records"] = nlohmann::json::array();
            for (const auto& z : roots.points)
                j["records"].push_back(deflation_json(deflation_sequence(sys, z, 16, m, tol),
                                                      sys.variables));
            auto groups = partition_points(sys, roots.points, m, tol);
            j["groups"] = nlohmann::json::array();
            for (const auto& g : groups) {
                nlohmann::json e;
                e["indices"] = g.indices;
                e["sequence"] = g.sequence;
                e["system"] = print_system(g.regularized);
                j["groups"].push_back(std::move(e));
            }
            emit(j, format, out_path);
            if (format == "text") {
                for (const auto& rec : j["records"]) {
                    std::cout << "sequence:";
                    for (const auto& d : rec["sequence"]) std::cout << " " << d;
                    std::cout << "  (" << rec["status"].get<std::string>() << ")\n";
                    for (const auto& it : rec["iterations"])
                        std::cout << "  d=" << it["d"] << "  full minors=" << it["full_minor_count"]
                                  << "  reduced minors=" << it["reduced_minor_count"] << "\n";
                }
                std::cout << "groups: " << groups.size() << "\n";
            }
            return 0;
        }

        PipelineOptions opt;
        opt.seed = seed;
        opt.precision_bits = precision;
        opt.max_iterations = max_iter;
        opt.method = method == "global" ? PipelineOptions::Method::Global
                                        : PipelineOptions::Method::Local;
        opt.normalize_primitive = normalize_u;
        if (!tolerance_arg.empty()) opt.residual_tolerance = parse_rational_arg(tolerance_arg);
        for (const auto& s : split_commas(e_override_arg))
            opt.e_override.push_back(parse_rational_arg(s));
        for (const auto& s : split_commas(b_schedule_arg)) opt.b_schedule.push_back(int_from_string(s));
        if (!lambda_arg.empty()) {
            std::vector<Rational> lam;
            for (const auto& s : split_commas(lambda_arg)) lam.push_back(parse_rational_arg(s));
            opt.lambda_override = std::move(lam);
        }

        CertificateReport rep = certify_pipeline(sys, roots, opt);
        emit(report_json(rep, opt), format, out_path);
        if (format == "text") print_text_report(rep);

        if (rur_cmd->parsed()) {
            // rur subcommand reports the representation without gating the
            // exit code on certification.
            return rep.certified_rur || rep.outcome == CertificateReport::Outcome::Inconclusive
                       ? 0 : outcome_exit_code(rep.outcome);
        }
        return outcome_exit_code(rep.outcome);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
