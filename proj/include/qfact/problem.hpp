#ifndef QFACT_PROBLEM_HPP
#define QFACT_PROBLEM_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qfact/gce.hpp"

namespace qfact {

struct SpaceSpec {
    std::string name;
    Eigen::Index ambient_dim = 0;
    std::vector<CMatrix> generators;
    CMatrix density;
};

struct MapSpec {
    std::string name;
    std::string from;
    std::string to;
    std::vector<CMatrix> action;  // images of the source algebra basis, or
    std::vector<CMatrix> kraus;   // Kraus family; exactly one of the two is set
};

enum class TaskKind {
    validate,
    markov,
    dilate,
    factorize_deterministic,
    factorize_abelian,
    certify_jhat,
    gce,
};
const char* to_string(TaskKind k);

struct TaskSpec {
    TaskKind kind = TaskKind::validate;
    std::string map;
    std::optional<CMatrix> jhat;  // convention: v -> mat conj(v), on L_{Phi#}
};

struct ProblemFile {
    Tolerance tolerances;
    std::vector<SpaceSpec> spaces;
    std::vector<MapSpec> maps;
    std::vector<TaskSpec> tasks;
};

/// Parse and validate a problem file; throws ProblemError with a JSON-path
/// (and line, for syntax errors) diagnostic.
ProblemFile parse_problem(const std::string& path);
ProblemFile parse_problem_text(const std::string& text);

struct CertificateSummary {
    Eigen::Index dim_R = 0;
    bool valid = false;
    bool minimal = false;
    double reconstruction_residual = 0.0;
};

struct TaskResult {
    int index = 0;
    TaskKind kind = TaskKind::validate;
    std::string map;
    std::string status;  // "pass" | "fail" | "error"
    std::vector<std::pair<std::string, bool>> flags;
    std::vector<std::pair<std::string, double>> residuals;
    std::optional<CertificateSummary> certificate;
    std::string error;
    double wall_ms = 0.0;
};

struct Report {
    Tolerance tolerances;
    std::vector<TaskResult> tasks;

    bool all_green() const;
};

/// Execute every task in order; a failing task never aborts the others.
Report run(const ProblemFile& problem);

enum class ReportFormat { json, text };

/// JSON output is stable-key-ordered and deterministic (wall times are
/// reported only in the text form).
std::string emit(const Report& report, ReportFormat format);

}  // namespace qfact

#endif
