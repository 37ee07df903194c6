#include "qfact/problem.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qfact {

using ordered_json = nlohmann::ordered_json;

const char* to_string(TaskKind k) {
    switch (k) {
        case TaskKind::validate: return "validate";
        case TaskKind::markov: return "markov";
        case TaskKind::dilate: return "dilate";
        case TaskKind::factorize_deterministic: return "factorize_deterministic";
        case TaskKind::factorize_abelian: return "factorize_abelian";
        case TaskKind::certify_jhat: return "certify_jhat";
        case TaskKind::gce: return "gce";
    }
    return "?";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ProblemError(path + ": " + what);
}

Complex parse_entry(const ordered_json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail(path, "expected a complex entry as a [re, im] pair");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

CMatrix parse_matrix(const ordered_json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a matrix as an array of rows");
    const size_t rows = j.size();
    size_t cols = 0;
    CMatrix m;
    for (size_t r = 0; r < rows; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || row.empty())
            fail(path + "[" + std::to_string(r) + "]", "expected a row array");
        if (r == 0) {
            cols = row.size();
            m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        } else if (row.size() != cols) {
            fail(path + "[" + std::to_string(r) + "]", "ragged matrix rows");
        }
        for (size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_entry(row[c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    return m;
}

std::vector<CMatrix> parse_matrix_list(const ordered_json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of matrices");
    std::vector<CMatrix> out;
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_matrix(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

TaskKind parse_kind(const std::string& s, const std::string& path) {
    for (TaskKind k : {TaskKind::validate, TaskKind::markov, TaskKind::dilate,
                       TaskKind::factorize_deterministic, TaskKind::factorize_abelian,
                       TaskKind::certify_jhat, TaskKind::gce})
        if (s == to_string(k)) return k;
    fail(path, "unknown task kind '" + s + "'");
}

ordered_json matrix_to_json(const CMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        size_t line = 1;
        for (size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw ProblemError("line " + std::to_string(line) + ": " + e.what());
    }
    if (!j.is_object()) throw ProblemError("$: problem file must be a JSON object");

    ProblemFile p;
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) fail("$.tolerances", "expected an object");
        if (t.contains("rank_cut")) p.tolerances.rank_cut = t["rank_cut"].get<double>();
        if (t.contains("residual_pass"))
            p.tolerances.residual_pass = t["residual_pass"].get<double>();
        try {
            p.tolerances.validate();
        } catch (const std::exception& e) {
            fail("$.tolerances", e.what());
        }
    }

    if (!j.contains("spaces") || !j["spaces"].is_object())
        fail("$.spaces", "missing required object");
    for (const auto& [name, body] : j["spaces"].items()) {
        const std::string path = "$.spaces." + name;
        SpaceSpec s;
        s.name = name;
        if (!body.is_object()) fail(path, "expected an object");
        if (!body.contains("ambient_dim") || !body["ambient_dim"].is_number_integer())
            fail(path + ".ambient_dim", "expected an integer");
        s.ambient_dim = body["ambient_dim"].get<Eigen::Index>();
        if (s.ambient_dim <= 0) fail(path + ".ambient_dim", "must be positive");
        if (!body.contains("generators")) fail(path + ".generators", "missing");
        s.generators = parse_matrix_list(body["generators"], path + ".generators");
        for (size_t i = 0; i < s.generators.size(); ++i)
            if (s.generators[i].rows() != s.ambient_dim || s.generators[i].cols() != s.ambient_dim)
                fail(path + ".generators[" + std::to_string(i) + "]", "wrong shape");
        if (!body.contains("density")) fail(path + ".density", "missing");
        s.density = parse_matrix(body["density"], path + ".density");
        if (s.density.rows() != s.ambient_dim || s.density.cols() != s.ambient_dim)
            fail(path + ".density", "wrong shape");
        p.spaces.push_back(std::move(s));
    }

    if (j.contains("maps")) {
        if (!j["maps"].is_object()) fail("$.maps", "expected an object");
        for (const auto& [name, body] : j["maps"].items()) {
            const std::string path = "$.maps." + name;
            MapSpec m;
            m.name = name;
            if (!body.is_object()) fail(path, "expected an object");
            for (const char* key : {"from", "to"}) {
                if (!body.contains(key) || !body[key].is_string())
                    fail(path + "." + key, "expected a space name");
            }
            m.from = body["from"].get<std::string>();
            m.to = body["to"].get<std::string>();
            auto find_space = [&](const std::string& n, const std::string& where) {
                for (const auto& s : p.spaces)
                    if (s.name == n) return;
                fail(where, "unresolved space name '" + n + "'");
            };
            find_space(m.from, path + ".from");
            find_space(m.to, path + ".to");
            bool has_action = body.contains("action");
            bool has_kraus = body.contains("kraus");
            if (has_action == has_kraus)
                fail(path, "exactly one of 'action' or 'kraus' is required");
            if (has_action) m.action = parse_matrix_list(body["action"], path + ".action");
            if (has_kraus) m.kraus = parse_matrix_list(body["kraus"], path + ".kraus");
            p.maps.push_back(std::move(m));
        }
    }

    if (j.contains("tasks")) {
        if (!j["tasks"].is_array()) fail("$.tasks", "expected an array");
        int idx = 0;
        for (const auto& body : j["tasks"]) {
            const std::string path = "$.tasks[" + std::to_string(idx) + "]";
            TaskSpec t;
            if (!body.is_object()) fail(path, "expected an object");
            if (!body.contains("kind") || !body["kind"].is_string())
                fail(path + ".kind", "expected a string");
            t.kind = parse_kind(body["kind"].get<std::string>(), path + ".kind");
            if (!body.contains("map") || !body["map"].is_string())
                fail(path + ".map", "expected a map name");
            t.map = body["map"].get<std::string>();
            bool found = false;
            for (const auto& m : p.maps) found = found || m.name == t.map;
            if (!found) fail(path + ".map", "unresolved map name '" + t.map + "'");
            if (body.contains("jhat")) {
                t.jhat = parse_matrix(body["jhat"], path + ".jhat");
                if (body.contains("jhat_convention")) {
                    std::string conv = body["jhat_convention"].get<std::string>();
                    if (conv != "conjugate-then-multiply")
                        fail(path + ".jhat_convention",
                             "unknown convention '" + conv + "' (expected conjugate-then-multiply)");
                }
            }
            p.tasks.push_back(std::move(t));
            ++idx;
        }
    }
    return p;
}

ProblemFile parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProblemError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str());
}

namespace {

struct Workspace {
    std::map<std::string, SpacePtr> spaces;
    std::map<std::string, StochasticMap> maps;
};

SpacePtr build_space(const SpaceSpec& spec, const Tolerance& tol) {
    ProbabilitySpace p;
    p.algebra = generate(spec.ambient_dim, spec.generators, tol);
    double member = contains(p.algebra, spec.density, tol);
    if (member > 100 * tol.residual_pass)
        throw ProblemError("space '" + spec.name + "': density is not in the algebra span");
    p.density = spec.density;
    return gns_ptr(p, tol);
}

StochasticMap build_map(const MapSpec& spec, Workspace& ws, const Tolerance& tol) {
    SpacePtr src = ws.spaces.at(spec.from);
    SpacePtr tgt = ws.spaces.at(spec.to);
    const auto& amb = src->origin->algebra;
    std::vector<CMatrix> images;
    if (!spec.kraus.empty()) {
        for (const auto& k : spec.kraus)
            if (k.rows() != tgt->origin->algebra.ambient_dim || k.cols() != amb.ambient_dim)
                throw ProblemError("map '" + spec.name + "': Kraus operator of wrong shape");
        for (const auto& b : amb.basis) {
            CMatrix img = CMatrix::Zero(tgt->origin->algebra.ambient_dim,
                                        tgt->origin->algebra.ambient_dim);
            for (const auto& k : spec.kraus) img += k * b * k.adjoint();
            images.push_back(img);
        }
    } else {
        if (spec.action.size() != static_cast<size_t>(amb.dim()))
            throw ProblemError("map '" + spec.name + "': expected " + std::to_string(amb.dim()) +
                               " action images (one per source basis element), got " +
                               std::to_string(spec.action.size()));
        images = spec.action;
    }
    for (size_t i = 0; i < images.size(); ++i) {
        double member = contains(tgt->origin->algebra, images[i], tol);
        if (member > 100 * tol.residual_pass)
            throw ProblemError("map '" + spec.name + "': image " + std::to_string(i) +
                               " is not in the target algebra span");
    }
    return make_map_ambient(src, tgt, images, tol);
}

void push_flags(TaskResult& r, const StochasticMap& m) {
    r.flags.emplace_back("unital", m.unital.ok);
    r.flags.emplace_back("cp", m.cp.ok);
    r.flags.emplace_back("state-preserving", m.state_preserving.ok);
    r.residuals.emplace_back("unital", m.unital.residual);
    r.residuals.emplace_back("cp", m.cp.residual);
    r.residuals.emplace_back("state-preserving", m.state_preserving.residual);
}

JHat resolve_jhat(const TaskSpec& task, const SharpDilation& sd, const Tolerance& tol) {
    if (task.jhat) return make_jhat(sd, *task.jhat, JhatProvenance::user_supplied, tol);
    if (multiplicativity_residual(sd.phi) <= tol.residual_pass) return jhat_deterministic(sd, tol);
    if (is_abelian(sd.phi.source->rep_algebra, tol) && is_abelian(sd.phi.target->rep_algebra, tol))
        return jhat_abelian(sd, tol);
    throw ProblemError("no canonical Jhat for this map; supply one in the task");
}

void certificate_summary(TaskResult& r, const FactorizationCertificate& cert) {
    CertificateSummary s;
    s.dim_R = cert.R.dim();
    s.valid = cert.valid;
    s.minimal = cert.minimal;
    s.reconstruction_residual = cert.reconstruction_residual;
    r.certificate = s;
    r.flags.emplace_back("certificate-valid", cert.valid);
    r.flags.emplace_back("minimal", cert.minimal);
    r.flags.emplace_back("omega-separating", cert.omega_separating);
    r.residuals.emplace_back("cond1-a", cert.cond1_a);
    r.residuals.emplace_back("cond1-b", cert.cond1_b);
    r.residuals.emplace_back("recon-phi", cert.reconstruction_residual);
    r.residuals.emplace_back("recon-sharp", cert.reconstruction_residual_sharp);
    r.residuals.emplace_back("minimal-residual", cert.minimal_residual);
}

TaskResult run_task(int index, const TaskSpec& task, Workspace& ws, const Tolerance& tol) {
    TaskResult r;
    r.index = index;
    r.kind = task.kind;
    r.map = task.map;
    const StochasticMap& phi = ws.maps.at(task.map);

    switch (task.kind) {
        case TaskKind::validate: {
            push_flags(r, phi);
            r.flags.emplace_back("normal", true);  // automatic in finite dimension
            r.status = phi.stochastic() ? "pass" : "fail";
            break;
        }
        case TaskKind::markov: {
            auto mk = markov_check(phi, tol);
            r.residuals.emplace_back("prop1-i", mk.cond_adjoint.residual);
            r.residuals.emplace_back("prop1-ii", mk.cond_modular.residual);
            r.residuals.emplace_back("prop1-iii", mk.cond_j.residual);
            r.flags.emplace_back("agree", mk.agree);
            r.flags.emplace_back("markov", mk.markov);
            r.status = mk.markov ? "pass" : "fail";
            break;
        }
        case TaskKind::dilate: {
            auto d = dilate(phi, tol);
            auto rel = verify_relations(d, tol);
            for (const auto& [name, v] : rel.rows) r.residuals.emplace_back(name, v);
            r.residuals.emplace_back("L-dim", static_cast<double>(d.L_dim));
            r.status = rel.max_residual() <= tol.residual_pass ? "pass" : "fail";
            break;
        }
        case TaskKind::factorize_deterministic: {
            auto cert = deterministic_factorize(phi, tol);
            auto sd = make_sharp_dilation(phi, tol);
            auto jh = jhat_deterministic(sd, tol);
            auto jcert = certify(sd, jh, tol);
            certificate_summary(r, jcert);
            r.residuals.emplace_back("antiunij", jh.antiunij_residual);
            r.residuals.emplace_back("jhat-involution", jh.involution_residual);
            r.residuals.emplace_back("sigma-duality", cert.extras.at("sigma-duality"));
            r.residuals.emplace_back("theta-duality", cert.extras.at("theta-duality"));
            r.flags.emplace_back("theta-route-valid", cert.valid);
            r.status = (cert.valid && jcert.valid) ? "pass" : "fail";
            break;
        }
        case TaskKind::factorize_abelian: {
            auto sd = make_sharp_dilation(phi, tol);
            auto jh = jhat_abelian(sd, tol);
            auto cert = certify(sd, jh, tol);
            certificate_summary(r, cert);
            r.residuals.emplace_back("antiunij", jh.antiunij_residual);
            r.residuals.emplace_back("w-involution", jh.involution_residual);
            r.status = (cert.valid && cert.minimal) ? "pass" : "fail";
            break;
        }
        case TaskKind::certify_jhat: {
            auto sd = make_sharp_dilation(phi, tol);
            auto jh = resolve_jhat(task, sd, tol);
            auto cert = certify(sd, jh, tol);
            certificate_summary(r, cert);
            r.residuals.emplace_back("antiunij", jh.antiunij_residual);
            r.residuals.emplace_back("jhat-antiunitary", jh.antiunitary_residual);
            r.status = cert.valid ? "pass" : "fail";
            break;
        }
        case TaskKind::gce: {
            auto sd = make_sharp_dilation(phi, tol);
            auto jh = resolve_jhat(task, sd, tol);
            auto rep = gce_factorization(sd, jh, tol);
            r.residuals.emplace_back("CCE-1", rep.cce1);
            r.residuals.emplace_back("CCE-2", rep.cce2);
            r.residuals.emplace_back("prop5-grid1", rep.prop5_grid1);
            r.residuals.emplace_back("prop5-grid2", rep.prop5_grid2);
            r.residuals.emplace_back("corollary1", rep.corollary_sharp);
            r.residuals.emplace_back("remark1-e1", rep.remark1_e1);
            r.residuals.emplace_back("remark1-e2", rep.remark1_e2);
            r.flags.emplace_back("cce-pass", rep.cce_pass);
            r.flags.emplace_back("remark1-fwd", rep.remark1_forward);
            r.flags.emplace_back("remark1-bwd", rep.remark1_backward);
            r.flags.emplace_back("omega-separating", rep.omega_separating);
            if (rep.certificate) certificate_summary(r, *rep.certificate);
            r.flags.emplace_back("certificate-emitted", rep.certificate.has_value());
            r.status = (rep.cce_pass && rep.certificate && rep.certificate->valid) ? "pass" : "fail";
            break;
        }
    }
    return r;
}

}  // namespace

bool Report::all_green() const {
    for (const auto& t : tasks)
        if (t.status != "pass") return false;
    return true;
}

Report run(const ProblemFile& problem) {
    Report rep;
    rep.tolerances = problem.tolerances;
    Workspace ws;

    std::map<std::string, std::string> broken;  // name -> error
    for (const auto& s : problem.spaces) {
        try {
            ws.spaces[s.name] = build_space(s, problem.tolerances);
        } catch (const std::exception& e) {
            broken["space:" + s.name] = e.what();
        }
    }
    for (const auto& m : problem.maps) {
        try {
            if (!ws.spaces.count(m.from))
                throw ProblemError("source space '" + m.from + "' failed to build");
            if (!ws.spaces.count(m.to))
                throw ProblemError("target space '" + m.to + "' failed to build");
            ws.maps.emplace(m.name, build_map(m, ws, problem.tolerances));
        } catch (const std::exception& e) {
            broken["map:" + m.name] = e.what();
        }
    }

    int index = 0;
    for (const auto& t : problem.tasks) {
        auto t0 = std::chrono::steady_clock::now();
        TaskResult r;
        if (!ws.maps.count(t.map)) {
            r.index = index;
            r.kind = t.kind;
            r.map = t.map;
            r.status = "error";
            auto it = broken.find("map:" + t.map);
            r.error = it != broken.end() ? it->second : "map failed to build";
        } else {
            try {
                r = run_task(index, t, ws, problem.tolerances);
            } catch (const std::exception& e) {
                r = TaskResult{};
                r.index = index;
                r.kind = t.kind;
                r.map = t.map;
                r.status = "error";
                r.error = e.what();
            }
        }
        r.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        rep.tasks.push_back(std::move(r));
        ++index;
    }
    return rep;
}

std::string emit(const Report& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        ordered_json j;
        j["tool"] = "qfact";
        j["tolerances"] = {{"rank_cut", report.tolerances.rank_cut},
                           {"residual_pass", report.tolerances.residual_pass}};
        ordered_json tasks = ordered_json::array();
        for (const auto& t : report.tasks) {
            ordered_json jt;
            jt["index"] = t.index;
            jt["kind"] = to_string(t.kind);
            jt["map"] = t.map;
            jt["status"] = t.status;
            if (!t.flags.empty()) {
                ordered_json f;
                for (const auto& [k, v] : t.flags) f[k] = v;
                jt["flags"] = f;
            }
            if (!t.residuals.empty()) {
                ordered_json res;
                for (const auto& [k, v] : t.residuals) res[k] = v;
                jt["residuals"] = res;
            }
            if (t.certificate) {
                jt["certificate"] = {{"dim_R", t.certificate->dim_R},
                                     {"valid", t.certificate->valid},
                                     {"minimal", t.certificate->minimal},
                                     {"reconstruction_residual",
                                      t.certificate->reconstruction_residual}};
            }
            if (!t.error.empty()) jt["error"] = t.error;
            tasks.push_back(jt);
        }
        j["tasks"] = tasks;
        int passed = 0, failed = 0, errors = 0;
        for (const auto& t : report.tasks) {
            if (t.status == "pass") ++passed;
            else if (t.status == "fail") ++failed;
            else ++errors;
        }
        j["summary"] = {{"tasks", static_cast<int>(report.tasks.size())},
                        {"passed", passed},
                        {"failed", failed},
                        {"errors", errors}};
        return j.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "qfact report  (residual_pass=" << report.tolerances.residual_pass
        << ", rank_cut=" << report.tolerances.rank_cut << ")\n";
    for (const auto& t : report.tasks) {
        out << "\n[" << t.index << "] " << to_string(t.kind) << " " << t.map << "  ->  "
            << t.status << "  (" << t.wall_ms << " ms)\n";
        if (!t.error.empty()) out << "    error: " << t.error << "\n";
        for (const auto& [k, v] : t.flags) out << "    " << k << ": " << (v ? "true" : "false") << "\n";
        for (const auto& [k, v] : t.residuals) {
            out << "    " << k << " = " << v;
            if (k != "L-dim")
                out << (v <= report.tolerances.residual_pass ? "  [ok]" : "  [above tol]");
            out << "\n";
        }
        if (t.certificate)
            out << "    certificate: dim_R=" << t.certificate->dim_R
                << " valid=" << (t.certificate->valid ? "yes" : "no")
                << " minimal=" << (t.certificate->minimal ? "yes" : "no")
                << " recon=" << t.certificate->reconstruction_residual << "\n";
    }
    return out.str();
}

}  // namespace qfact
