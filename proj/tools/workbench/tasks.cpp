#include "tasks.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <regex>

#include "awb/prolongation.hpp"

namespace wb {

using namespace awb;

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

// Argument kinds: a algebroid, t tensor, i im tensor, k structure kind,
// n integers (rest of the line), m optional pqn mode ("full" or "relative PHI").
struct Command {
    std::string sig;
    std::string help;
    std::function<Report(const Problem&, const Task&, const RunOptions&)> run;
};

std::string verdict(bool ok) { return ok ? "pass" : "fail"; }

void compare_components(Report& rep, const std::string& check, const IMTensor& a, const IMTensor& b) {
    rep.declare(check);
    if (a.q() != b.q() || a.p() != b.p()) {
        rep.record(check, "degrees", RatFn(1L));
        return;
    }
    const Algebroid& A = *a.algebroid();
    for (int k = 0; k < A.n(); ++k) {
        rep.record(check, "D " + A.bundle()->frame[u(k)], a.D_frame()[u(k)] - b.D_frame()[u(k)]);
        if (a.has_l()) rep.record(check, "l " + A.bundle()->frame[u(k)], a.l_frame()[u(k)] - b.l_frame()[u(k)]);
    }
    if (a.has_r())
        for (int s = 0; s < A.m(); ++s)
            rep.record(check, "r d" + A.chart()->vars[u(s)].name(), a.r_frame()[u(s)] - b.r_frame()[u(s)]);
}

const IMTensor& im_arg(const Problem& P, const Task& t, std::size_t i) { return P.im(t.args[i], t.line); }
const MixedTensor& tensor_arg(const Problem& P, const Task& t, std::size_t i) { return P.tensor(t.args[i], t.line); }
const AlgebroidPtr& alg_arg(const Problem& P, const Task& t, std::size_t i) { return P.algebroid(t.args[i], t.line); }

Report cocycle_equiv(const IMTensor& T, bool scaled) {
    Report rep("cocycle condition vs IM equations");
    Report co = cocycle_check(T, scaled), im = im_check(T, scaled);
    rep.declare("verdicts agree");
    rep.record("verdicts agree", "cocycle " + verdict(co.passed()) + ", IM " + verdict(im.passed()),
               RatFn(co.passed() == im.passed() ? 0L : 1L));
    // Families map to equations on frame probes.
    Report cof = scaled ? cocycle_check(T, false) : co, imf = scaled ? im_check(T, false) : im;
    rep.declare("families match equations");
    static const std::regex eq(R"(\(IM(\d)\))");
    for (const auto& name : cof.failing_checks()) {
        std::smatch m;
        if (!std::regex_search(name, m, eq)) continue;
        std::string target = "IM" + m[1].str();
        rep.record("families match equations", name + " -> " + target, RatFn(imf.passed(target) ? 1L : 0L));
    }
    for (const auto& name : co.failing_checks()) rep.add_note("cocycle fails: " + name);
    for (const auto& name : im.failing_checks()) rep.add_note("IM fails: " + name);
    return rep;
}

Report qdiff_roundtrip(const IMTensor& T, bool scaled) {
    if (T.p() != 0) throw DegreeError("qdiff-roundtrip needs an IM (q,0)-tensor");
    Report rep("q-differential round trip");
    QDifferential delta = qdiff_from_im(T);
    Report qd = qdiff_check(delta), im = im_check(T, scaled);
    rep.declare("qdiff iff IM");
    rep.record("qdiff iff IM", "qdiff " + verdict(qd.passed()) + ", IM " + verdict(im.passed()),
               RatFn(qd.passed() == im.passed() ? 0L : 1L));
    compare_components(rep, "round trip", im_from_qdiff(delta), T);
    rep.merge(qdiff_leibniz_against(delta, T), "sign ");
    return rep;
}

Report linear_roundtrip(const IMTensor& T) {
    Report rep("linear tensor round trip");
    LinearTensor tau = reconstruct_linear(T);
    rep.declare("invariants");
    std::string v = linear_tensor_violation(tau);
    rep.record("invariants", v.empty() ? "reconstruction" : v, RatFn(v.empty() ? 0L : 1L));
    IMTensor back = extract_components(tau);
    compare_components(rep, "extract o reconstruct", back, T);
    rep.declare("reconstruct o extract");
    rep.record("reconstruct o extract", "value", reconstruct_linear(back).value - tau.value);
    rep.merge(homogeneity_check(tau));
    return rep;
}

Report lie_identities(const Algebroid& A, const MixedTensor& tau) {
    Report rep("Lie derivative identities");
    const ChartPtr& c = A.chart();
    for (int i = 0; i < A.n(); ++i) {
        std::vector<RatFn> mu(u(A.n()));
        mu[u(i)] = RatFn::variable(c->vars[u(i % A.m())]);
        VectorField Y = VectorField::coordinate(c, i % A.m()).scaled(RatFn::variable(c->vars[u((i + 1) % A.m())]));
        MixedTensor a = A.frame(i).scaled(RatFn::variable(c->vars[u((i + 1) % A.m())]));
        rep.merge(cwl_lie_derivative_identities(A, tau, A.frame(i), VectorField::coordinate(c, i % A.m()), mu));
        rep.merge(cwl_lie_derivative_identities(A, tau, a, Y, mu));
    }
    return rep;
}

Report fn_jacobi(const MixedTensor& K1, const MixedTensor& K2, const MixedTensor& K3) {
    Report rep("Froelicher-Nijenhuis bracket");
    rep.declare("graded skew");
    rep.declare("graded Jacobi");
    const MixedTensor* K[] = {&K1, &K2, &K3};
    auto sign = [](int a, int b) { return (a * b) % 2 ? -1 : 1; };
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            MixedTensor ij = fn_bracket(*K[i], *K[j]), ji = fn_bracket(*K[j], *K[i]);
            rep.record("graded skew", "(K" + std::to_string(i + 1) + ",K" + std::to_string(j + 1) + ")",
                       sign(K[i]->p(), K[j]->p()) > 0 ? ij + ji : ij - ji);
        }
    MixedTensor lhs = fn_bracket(K1, fn_bracket(K2, K3));
    MixedTensor rhs = fn_bracket(fn_bracket(K1, K2), K3);
    MixedTensor t = fn_bracket(K2, fn_bracket(K1, K3));
    rhs = sign(K1.p(), K2.p()) > 0 ? rhs + t : rhs - t;
    rep.record("graded Jacobi", "(K1,K2,K3)", lhs - rhs);
    return rep;
}

Report nijenhuis_task(const MixedTensor& K) {
    Report rep("Nijenhuis torsion");
    rep.declare("half square = torsion");
    rep.declare("explicit (1,1) formula");
    MixedTensor sq = fn_bracket(K, K);
    rep.record("half square = torsion", "K", sq.scaled(RatFn(Rational(1, 2))) - nijenhuis_torsion(K));
    rep.record("explicit (1,1) formula", "[K,K]", fn_bracket_11(K, K) - sq);
    rep.add_note(nijenhuis_torsion(K).is_zero() ? "torsion vanishes" : "torsion = " + nijenhuis_torsion(K).to_string());
    return rep;
}

Report components_task(const IMTensor& T) {
    Report rep("Nijenhuis components");
    IMTensor N = nijenhuis_components(T);
    rep.declare("r' = N_r");
    MixedTensor Nr = nijenhuis_torsion(r_as_vv(T));
    for (int s = 0; s < T.algebroid()->m(); ++s)
        rep.record("r' = N_r", "d" + T.algebroid()->chart()->vars[u(s)].name(),
                   N.r_frame()[u(s)] - on_bundle(vv_component(Nr, s), T.algebroid()->bundle()));
    rep.merge(d_squared_cross_check(T));
    return rep;
}

Report flat_task(const IMTensor& T) {
    Report rep("vanishing Nijenhuis components");
    IMTensor N = nijenhuis_components(T);
    const Algebroid& A = *T.algebroid();
    for (const char* c : {"D'", "l'", "r'"}) rep.declare(c);
    for (int k = 0; k < A.n(); ++k) {
        rep.record("D'", A.bundle()->frame[u(k)], N.D_frame()[u(k)]);
        rep.record("l'", A.bundle()->frame[u(k)], N.l_frame()[u(k)]);
    }
    for (int s = 0; s < A.m(); ++s) rep.record("r'", "d" + A.chart()->vars[u(s)].name(), N.r_frame()[u(s)]);
    return rep;
}

StructureKind kind_of(const std::string& s) {
    if (s == "projection") return StructureKind::projection;
    if (s == "product") return StructureKind::product;
    return StructureKind::complex;
}

PqnMode mode_of(const Problem& P, const Task& t, std::size_t from) {
    PqnMode m;
    if (t.args.size() <= from) return m;
    if (t.args[from] == "full") {
        m.kind = PqnMode::full;
    } else {
        m.kind = PqnMode::relative;
        m.phi = P.tensor(t.args[from + 1], t.line);
    }
    return m;
}

const MixedTensor& bivector_of(const Problem& P, const Task& t, std::size_t i) {
    const AlgebroidPtr& A = alg_arg(P, t, i);
    return P.bivector_of.at(A.get());
}

Report pqn_equiv(const Problem& P, const Task& t, const RunOptions& opt) {
    const AlgebroidPtr& A = alg_arg(P, t, 0);
    const MixedTensor& r = tensor_arg(P, t, 1);
    Report rep("compatibility vs IM equations for D^r");
    Report pq = pqn_check(bivector_of(P, t, 0), r);
    bool compat = pq.passed("sharp compat") && pq.passed("C^r");
    Report im = im11_check(dr_operator(A, r), opt.scaled_probes);
    rep.declare("verdicts agree");
    rep.record("verdicts agree", "compat " + verdict(compat) + ", IM " + verdict(im.passed()), RatFn(compat == im.passed() ? 0L : 1L));
    for (const auto& n : pq.failing_checks()) rep.add_note("compatibility fails: " + n);
    for (const auto& n : im.failing_checks()) rep.add_note("IM fails: " + n);
    return rep;
}

Report matched_pairs(const IMTensor& T) {
    Report rep("matched pairs of a projection");
    rep.merge(matched_pair_check(pair_A0_A1(T)), "(A0,A1) ");
    rep.merge(matched_pair_check(pair_T0_T1(T)), "(T0,T1) ");
    rep.merge(matched_pair_check(pair_A0_T1(T)), "(A0,T1) ");
    rep.merge(matched_pair_check(pair_T0_A1(T)), "(T0,A1) ");
    return rep;
}

const std::map<std::string, Command>& commands() {
    static const std::map<std::string, Command> table = {
        {"check-algebroid", {"a", "skewness, anchor and Jacobi on the frame",
                             [](const Problem& P, const Task& t, const RunOptions&) { return check_algebroid(*alg_arg(P, t, 0)); }}},
        {"check-im", {"i", "the IM equations",
                      [](const Problem& P, const Task& t, const RunOptions& o) { return im_check(im_arg(P, t, 0), o.scaled_probes); }}},
        {"cocycle-equiv", {"i", "cocycle condition on generators agrees with the IM equations",
                           [](const Problem& P, const Task& t, const RunOptions& o) { return cocycle_equiv(im_arg(P, t, 0), o.scaled_probes); }}},
        {"qdiff-roundtrip", {"i", "IM (q,0)-tensor to q-differential and back",
                             [](const Problem& P, const Task& t, const RunOptions& o) { return qdiff_roundtrip(im_arg(P, t, 0), o.scaled_probes); }}},
        {"linear-roundtrip", {"i", "components to linear tensor and back",
                              [](const Problem& P, const Task& t, const RunOptions&) { return linear_roundtrip(im_arg(P, t, 0)); }}},
        {"redundancy", {"in", "implications between IM equations assuming the listed ones",
                        [](const Problem& P, const Task& t, const RunOptions&) {
                            std::set<int> assumed;
                            for (std::size_t i = 1; i < t.args.size(); ++i) assumed.insert(std::stoi(t.args[i]));
                            return im_redundancy(im_arg(P, t, 0), assumed);
                        }}},
        {"lie-identities", {"at", "Lie derivative identities of a tensor on the big base",
                            [](const Problem& P, const Task& t, const RunOptions&) { return lie_identities(*alg_arg(P, t, 0), tensor_arg(P, t, 1)); }}},
        {"fn-jacobi", {"ttt", "graded skewness and Jacobi of the FN bracket",
                       [](const Problem& P, const Task& t, const RunOptions&) {
                           return fn_jacobi(tensor_arg(P, t, 0), tensor_arg(P, t, 1), tensor_arg(P, t, 2));
                       }}},
        {"nijenhuis", {"t", "half the FN square against the torsion formula",
                       [](const Problem& P, const Task& t, const RunOptions&) { return nijenhuis_task(tensor_arg(P, t, 0)); }}},
        {"im11", {"i", "the (1,1) IM equations",
                  [](const Problem& P, const Task& t, const RunOptions& o) { return im11_check(im_arg(P, t, 0), o.scaled_probes); }}},
        {"nijenhuis-components", {"i", "r' = N_r and both routes for D^2",
                                  [](const Problem& P, const Task& t, const RunOptions&) { return components_task(im_arg(P, t, 0)); }}},
        {"flat", {"i", "the Nijenhuis components vanish",
                  [](const Problem& P, const Task& t, const RunOptions&) { return flat_task(im_arg(P, t, 0)); }}},
        {"structure", {"ik", "projection, product or complex conditions",
                       [](const Problem& P, const Task& t, const RunOptions&) {
                           return structure_conditions(im_arg(P, t, 0), kind_of(t.args[1]));
                       }}},
        {"pqn", {"ttm", "Poisson quasi-Nijenhuis conditions (modes: full, relative PHI)",
                 [](const Problem& P, const Task& t, const RunOptions&) {
                     return pqn_check(tensor_arg(P, t, 0), tensor_arg(P, t, 1), mode_of(P, t, 2));
                 }}},
        {"pqn-equiv", {"ct", "compatibility iff (D^r, r*, r) is IM, on a cotangent algebroid", pqn_equiv}},
        {"dr-identities", {"tt", "[D^r, r*] = -N_r* and the pairing formula for (D^r)^2",
                           [](const Problem& P, const Task& t, const RunOptions&) {
                               return dr_nijenhuis_identities(tensor_arg(P, t, 0), tensor_arg(P, t, 1));
                           }}},
        {"deltak", {"i", "delta_K skewness and [delta, i_Theta] = 0 on a cotangent algebroid",
                    [](const Problem& P, const Task& t, const RunOptions&) {
                        const IMTensor& T = im_arg(P, t, 0);
                        return deltaK_theta(BialgebroidData::cotangent(T.algebroid()), T);
                    }}},
        {"holomorphic", {"i", "complex conditions, Nijenhuis components and Dolbeault flatness",
                         [](const Problem& P, const Task& t, const RunOptions&) { return holomorphic_check(im_arg(P, t, 0)); }}},
        {"projection", {"i", "splitting criteria of a projection against the Nijenhuis components",
                        [](const Problem& P, const Task& t, const RunOptions&) { return projection_analysis(im_arg(P, t, 0)); }}},
        {"matched-pairs", {"i", "the four matched pairs of a projection",
                           [](const Problem& P, const Task& t, const RunOptions&) { return matched_pairs(im_arg(P, t, 0)); }}},
        {"splitting", {"i", "subalgebroids, matched pairs and morphism squares",
                       [](const Problem& P, const Task& t, const RunOptions&) { return splitting_check(im_arg(P, t, 0)); }}},
    };
    return table;
}

[[noreturn]] void bad(const Task& t, const std::string& msg) { throw DslError(DslError::semantic, t.line, 1, "task " + t.command + ": " + msg); }

}  // namespace

void validate_task(const Problem& P, const Task& t) {
    auto it = commands().find(t.command);
    if (it == commands().end()) bad(t, "unknown command");
    const std::string& sig = it->second.sig;
    std::size_t i = 0;
    for (char k : sig) {
        if (k == 'n') {
            for (; i < t.args.size(); ++i) {
                const std::string& a = t.args[i];
                if (a.size() != 1 || a[0] < '1' || a[0] > '6') bad(t, "'" + a + "' is not an IM equation number");
            }
            break;
        }
        if (k == 'm') {
            if (i == t.args.size()) break;
            if (t.args[i] == "full") {
                ++i;
            } else if (t.args[i] == "relative") {
                if (i + 1 >= t.args.size()) bad(t, "relative mode needs a closed 3-form");
                if (!P.tensors.count(t.args[i + 1])) bad(t, "unknown tensor '" + t.args[i + 1] + "'");
                i += 2;
            } else {
                bad(t, "unknown mode '" + t.args[i] + "'");
            }
            break;
        }
        if (i >= t.args.size()) bad(t, "too few arguments");
        const std::string& a = t.args[i++];
        switch (k) {
            case 'a':
                if (!P.algebroids.count(a)) bad(t, "unknown algebroid '" + a + "'");
                break;
            case 'c':
                if (!P.algebroids.count(a) || !P.bivector_of.count(P.algebroids.at(a).get())) bad(t, "'" + a + "' is not a cotangent algebroid");
                break;
            case 't':
                if (!P.tensors.count(a)) bad(t, "unknown tensor '" + a + "'");
                break;
            case 'i':
                if (!P.ims.count(a)) bad(t, "unknown im tensor '" + a + "'");
                break;
            case 'k':
                if (a != "projection" && a != "product" && a != "complex") bad(t, "kind must be projection, product or complex");
                break;
        }
    }
    if (i < t.args.size()) bad(t, "too many arguments");
    if (t.command == "deltak" && !P.bivector_of.count(P.ims.at(t.args[0]).algebroid().get()))
        bad(t, "'" + t.args[0] + "' is not on a cotangent algebroid");
}

TaskOutcome run_task(const Problem& P, const Task& t, const RunOptions& opt) {
    TaskOutcome out;
    out.name = t.name;
    auto start = std::chrono::steady_clock::now();
    try {
        Report rep = commands().at(t.command).run(P, t, opt);
        if (t.expect_fail) {
            Report wrapped(rep.title() + " (expected to fail)");
            wrapped.merge(rep);
            wrapped.declare("expect fail");
            if (rep.passed()) {
                wrapped.record("expect fail", "every check passed", RatFn(1L));
                out.status = "fail";
            } else {
                out.status = "pass";
            }
            out.report = std::move(wrapped);
        } else {
            out.status = rep.passed() ? "pass" : "fail";
            out.report = std::move(rep);
        }
    } catch (const std::exception& e) {
        out.status = "error";
        out.error = e.what();
    }
    out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::vector<std::string> task_synopses() {
    static const std::map<char, std::string> arg = {{'a', "ALGEBROID"}, {'c', "COTANGENT"}, {'t', "TENSOR"}, {'i', "IM"},
                                                    {'k', "projection|product|complex"}, {'n', "N..."}, {'m', "[full|relative PHI]"}};
    std::vector<std::string> out;
    for (const auto& [name, c] : commands()) {
        std::string line = name;
        for (char k : c.sig) line += " " + arg.at(k);
        out.push_back(line + "  -  " + c.help);
    }
    return out;
}

}  // namespace wb
