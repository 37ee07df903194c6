#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qfact/problem.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qfact: verification toolkit for stochastic maps between "
                 "finite-dimensional noncommutative probability spaces"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run the tasks in a problem file");
    std::string problem_path;
    std::string format = "text";
    std::string out_path;
    double tol_override = -1.0;
    verify->add_option("problem", problem_path, "problem JSON file")->required();
    verify->add_option("--tol", tol_override, "override residual_pass tolerance");
    verify->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "text"}));
    verify->add_option("--out", out_path, "write the report to a file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        qfact::ProblemFile problem = qfact::parse_problem(problem_path);
        if (const char* env = std::getenv("VERIFY_TOL")) {
            try {
                problem.tolerances.residual_pass = std::stod(env);
                problem.tolerances.validate();
            } catch (const std::exception&) {
                std::cerr << "error: VERIFY_TOL is not a valid tolerance\n";
                return 2;
            }
        }
        if (tol_override > 0.0) {
            problem.tolerances.residual_pass = tol_override;
            problem.tolerances.validate();
        }

        qfact::Report report = qfact::run(problem);
        std::string body = qfact::emit(report, format == "json" ? qfact::ReportFormat::json
                                                                : qfact::ReportFormat::text);
        if (out_path.empty()) {
            std::cout << body;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write " << out_path << "\n";
                return 2;
            }
            out << body;
        }
        return report.all_green() ? 0 : 1;
    } catch (const qfact::ProblemError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
