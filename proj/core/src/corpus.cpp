#include "motun/corpus.hpp"

#include <cmath>
#include <map>

#include "motun/rng.hpp"

namespace motun {

const char* to_string(StartMode m) { return m == StartMode::Lattice ? "lattice" : "random"; }

StartMode start_mode_from_string(const std::string& s) {
    if (s == "lattice")
        return StartMode::Lattice;
    if (s == "random")
        return StartMode::Random;
    throw Error("unknown start mode '" + s + "'");
}

namespace {

constexpr double kPi = 3.14159265358979323846;

ProblemSpec box_problem(std::string name, int n, double lo, double hi,
                        std::vector<ScalarFn> objectives, std::vector<GradientFn> grads) {
    ProblemSpec p;
    p.name = std::move(name);
    p.n = n;
    p.m = static_cast<int>(objectives.size());
    p.objectives = std::move(objectives);
    p.objective_grads = std::move(grads);
    add_box_constraints(p, Vector::Constant(n, lo), Vector::Constant(n, hi));
    p.validate();
    return p;
}

// Multimodal tail shared by DTLZ1 and DTLZ3 (n = 2, one tail variable):
// 100 * (1 + (x2-0.5)^2 - cos(20 pi (x2-0.5))).
double dtlz_tail(double x2) {
    const double t = x2 - 0.5;
    return 100.0 * (1.0 + t * t - std::cos(20.0 * kPi * t));
}

double dtlz_tail_d(double x2) {
    const double t = x2 - 0.5;
    return 100.0 * (2.0 * t + 20.0 * kPi * std::sin(20.0 * kPi * t));
}

ProblemSpec make_dtlz1n2() {
    return box_problem(
        "DTLZ1n2", 2, 0.0, 1.0,
        {[](const Vector& x) { return 0.5 * (1.0 + dtlz_tail(x[1])) * x[0]; },
         [](const Vector& x) { return 0.5 * (1.0 + dtlz_tail(x[1])) * (1.0 - x[0]); }},
        {[](const Vector& x) {
             return Vector{{0.5 * (1.0 + dtlz_tail(x[1])), 0.5 * x[0] * dtlz_tail_d(x[1])}};
         },
         [](const Vector& x) {
             return Vector{
                 {-0.5 * (1.0 + dtlz_tail(x[1])), 0.5 * (1.0 - x[0]) * dtlz_tail_d(x[1])}};
         }});
}

// DTLZ2-shaped arc problems: f = (1+g) (cos(pi x1 / 2), sin(pi x1 / 2)) with
// problem-specific tail g(x2) and optional bias exponent on x1 (DTLZ4).
ProblemSpec make_arc_problem(std::string name, ScalarFn tail, ScalarFn tail_d,
                             double bias = 1.0) {
    auto angle = [bias](double x1) { return 0.5 * kPi * std::pow(x1, bias); };
    auto angle_d = [bias](double x1) {
        return bias == 1.0 ? 0.5 * kPi : 0.5 * kPi * bias * std::pow(x1, bias - 1.0);
    };
    std::vector<ScalarFn> fs = {
        [tail, angle](const Vector& x) { return (1.0 + tail(x)) * std::cos(angle(x[0])); },
        [tail, angle](const Vector& x) { return (1.0 + tail(x)) * std::sin(angle(x[0])); }};
    std::vector<GradientFn> gs = {
        [tail, tail_d, angle, angle_d](const Vector& x) {
            const double a = angle(x[0]);
            return Vector{{-(1.0 + tail(x)) * std::sin(a) * angle_d(x[0]),
                           tail_d(x) * std::cos(a)}};
        },
        [tail, tail_d, angle, angle_d](const Vector& x) {
            const double a = angle(x[0]);
            return Vector{{(1.0 + tail(x)) * std::cos(a) * angle_d(x[0]),
                           tail_d(x) * std::sin(a)}};
        }};
    return box_problem(std::move(name), 2, 0.0, 1.0, std::move(fs), std::move(gs));
}

ScalarFn quadratic_tail() {
    return [](const Vector& x) {
        const double t = x[1] - 0.5;
        return t * t;
    };
}
ScalarFn quadratic_tail_d() {
    return [](const Vector& x) { return 2.0 * (x[1] - 0.5); };
}

// ZDT family on [0,1]^10; gz(x) = 1 + 9 sum_{i>=2} x_i / (n-1).
constexpr int kZdtN = 10;

double zdt_g(const Vector& x) {
    double s = 0.0;
    for (Eigen::Index i = 1; i < x.size(); ++i)
        s += x[i];
    return 1.0 + 9.0 * s / static_cast<double>(x.size() - 1);
}

constexpr double kZdtGd = 9.0 / (kZdtN - 1);

ProblemSpec make_zdt1() {
    std::vector<ScalarFn> fs = {
        [](const Vector& x) { return x[0]; },
        [](const Vector& x) {
            const double g = zdt_g(x);
            return g - std::sqrt(x[0] * g);
        }};
    std::vector<GradientFn> gs = {
        [](const Vector& x) {
            Vector g = Vector::Zero(x.size());
            g[0] = 1.0;
            return g;
        },
        [](const Vector& x) {
            const double g = zdt_g(x);
            Vector out = Vector::Constant(x.size(),
                                          kZdtGd * (1.0 - 0.5 * std::sqrt(x[0] / g)));
            out[0] = -0.5 * std::sqrt(g / x[0]);
            return out;
        }};
    return box_problem("ZDT1", kZdtN, 0.0, 1.0, std::move(fs), std::move(gs));
}

ProblemSpec make_zdt2() {
    std::vector<ScalarFn> fs = {
        [](const Vector& x) { return x[0]; },
        [](const Vector& x) {
            const double g = zdt_g(x);
            return g - x[0] * x[0] / g;
        }};
    std::vector<GradientFn> gs = {
        [](const Vector& x) {
            Vector g = Vector::Zero(x.size());
            g[0] = 1.0;
            return g;
        },
        [](const Vector& x) {
            const double g = zdt_g(x);
            const double r = x[0] / g;
            Vector out = Vector::Constant(x.size(), kZdtGd * (1.0 + r * r));
            out[0] = -2.0 * x[0] / g;
            return out;
        }};
    return box_problem("ZDT2", kZdtN, 0.0, 1.0, std::move(fs), std::move(gs));
}

ProblemSpec make_zdt3() {
    std::vector<ScalarFn> fs = {
        [](const Vector& x) { return x[0]; },
        [](const Vector& x) {
            const double g = zdt_g(x);
            return g - std::sqrt(x[0] * g) - x[0] * std::sin(10.0 * kPi * x[0]);
        }};
    std::vector<GradientFn> gs = {
        [](const Vector& x) {
            Vector g = Vector::Zero(x.size());
            g[0] = 1.0;
            return g;
        },
        [](const Vector& x) {
            const double g = zdt_g(x);
            Vector out = Vector::Constant(x.size(),
                                          kZdtGd * (1.0 - 0.5 * std::sqrt(x[0] / g)));
            out[0] = -0.5 * std::sqrt(g / x[0]) - std::sin(10.0 * kPi * x[0]) -
                     10.0 * kPi * x[0] * std::cos(10.0 * kPi * x[0]);
            return out;
        }};
    return box_problem("ZDT3", kZdtN, 0.0, 1.0, std::move(fs), std::move(gs));
}

ProblemSpec make_zdt6() {
    auto f1 = [](const Vector& x) {
        const double s = std::sin(6.0 * kPi * x[0]);
        return 1.0 - std::exp(-4.0 * x[0]) * std::pow(s, 6);
    };
    auto f1_d = [](double x1) {
        const double s = std::sin(6.0 * kPi * x1);
        const double c = std::cos(6.0 * kPi * x1);
        return std::exp(-4.0 * x1) * std::pow(s, 5) * (4.0 * s - 36.0 * kPi * c);
    };
    auto g6 = [](const Vector& x) {
        double s = 0.0;
        for (Eigen::Index i = 1; i < x.size(); ++i)
            s += x[i];
        return 1.0 + 9.0 * std::pow(s / static_cast<double>(x.size() - 1), 0.25);
    };
    std::vector<ScalarFn> fs = {f1, [f1, g6](const Vector& x) {
                                    const double g = g6(x);
                                    const double v = f1(x);
                                    return g - v * v / g;
                                }};
    std::vector<GradientFn> gvec = {
        [f1_d](const Vector& x) {
            Vector g = Vector::Zero(x.size());
            g[0] = f1_d(x[0]);
            return g;
        },
        [f1, f1_d, g6](const Vector& x) {
            const double g = g6(x);
            const double v = f1(x);
            double s = 0.0;
            for (Eigen::Index i = 1; i < x.size(); ++i)
                s += x[i];
            const double u = s / static_cast<double>(x.size() - 1);
            const double gd = 9.0 * 0.25 * std::pow(u, -0.75) /
                              static_cast<double>(x.size() - 1);
            const double r = v / g;
            Vector out = Vector::Constant(x.size(), gd * (1.0 + r * r));
            out[0] = -2.0 * r * f1_d(x[0]);
            return out;
        }};
    return box_problem("ZDT6", kZdtN, 0.0, 1.0, std::move(fs), std::move(gvec));
}

// Fonseca-Fleming two-Gaussian problem on [-4,4]^2; MOP2 is the identical
// function under its suite name.
ProblemSpec make_fonseca(std::string name) {
    const double a = 1.0 / std::sqrt(2.0);
    std::vector<ScalarFn> fs = {
        [a](const Vector& x) {
            return 1.0 - std::exp(-(x.array() - a).square().sum());
        },
        [a](const Vector& x) {
            return 1.0 - std::exp(-(x.array() + a).square().sum());
        }};
    std::vector<GradientFn> gs = {
        [a](const Vector& x) {
            const double e = std::exp(-(x.array() - a).square().sum());
            return Vector(2.0 * e * (x.array() - a));
        },
        [a](const Vector& x) {
            const double e = std::exp(-(x.array() + a).square().sum());
            return Vector(2.0 * e * (x.array() + a));
        }};
    return box_problem(std::move(name), 2, -4.0, 4.0, std::move(fs), std::move(gs));
}

// Bi-objective with three linear constraints in addition to the box; the only
// mandatory corpus member exercising general inequality constraints.
ProblemSpec make_ex005() {
    ProblemSpec p;
    p.name = "ex005";
    p.n = 2;
    p.m = 2;
    p.objectives = {[](const Vector& x) { return x[0] * x[0] - x[1]; },
                    [](const Vector& x) { return -0.5 * x[0] - x[1] - 1.0; }};
    p.objective_grads = {[](const Vector& x) {
                             return Vector{{2.0 * x[0], -1.0}};
                         },
                         [](const Vector&) {
                             return Vector{{-0.5, -1.0}};
                         }};
    p.constraints = {
        [](const Vector& x) { return x[0] / 6.0 + x[1] - 6.5; },
        [](const Vector& x) { return 0.5 * x[0] + x[1] - 7.5; },
        [](const Vector& x) { return 5.0 * x[0] + x[1] - 30.0; }};
    p.constraint_grads = {[](const Vector&) {
                              return Vector{{1.0 / 6.0, 1.0}};
                          },
                          [](const Vector&) {
                              return Vector{{0.5, 1.0}};
                          },
                          [](const Vector&) {
                              return Vector{{5.0, 1.0}};
                          }};
    p.p = 3;
    add_box_constraints(p, Vector::Constant(2, -7.0), Vector::Constant(2, 4.0));
    p.validate();
    return p;
}

std::map<std::string, CorpusEntry> build_registry() {
    std::map<std::string, CorpusEntry> reg;
    auto add = [&reg](ProblemSpec spec, int m, int n) {
        std::string name = spec.name;
        reg.emplace(name, CorpusEntry{name, std::move(spec), {m, n}});
    };
    add(make_dtlz1n2(), 2, 2);
    add(make_arc_problem("DTLZ2n2", quadratic_tail(), quadratic_tail_d()), 2, 2);
    add(make_arc_problem(
            "DTLZ3n2", [](const Vector& x) { return dtlz_tail(x[1]); },
            [](const Vector& x) { return dtlz_tail_d(x[1]); }),
        2, 2);
    add(make_arc_problem("DTLZ4n2", quadratic_tail(), quadratic_tail_d(), 100.0), 2, 2);
    // DTLZ5 degenerates to DTLZ2 for two objectives (the angle transform only
    // touches coordinates 2..m-1); registered under its own name.
    add(make_arc_problem("DTLZ5n2", quadratic_tail(), quadratic_tail_d()), 2, 2);
    add(make_arc_problem(
            "DTLZ6n2", [](const Vector& x) { return std::pow(x[1], 0.1); },
            [](const Vector& x) { return 0.1 * std::pow(x[1], -0.9); }),
        2, 2);
    add(make_zdt1(), 2, kZdtN);
    add(make_zdt2(), 2, kZdtN);
    add(make_zdt3(), 2, kZdtN);
    add(make_zdt6(), 2, kZdtN);
    add(make_fonseca("Fonseca"), 2, 2);
    add(make_fonseca("MOP2"), 2, 2);
    add(make_ex005(), 2, 2);
    return reg;
}

const std::map<std::string, CorpusEntry>& registry() {
    static const std::map<std::string, CorpusEntry> reg = build_registry();
    return reg;
}

} // namespace

const CorpusEntry& get_corpus_entry(const std::string& name) {
    const auto& reg = registry();
    const auto it = reg.find(name);
    if (it == reg.end())
        throw UnknownProblem("unknown problem '" + name + "'");
    return it->second;
}

const ProblemSpec& get_problem(const std::string& name) {
    return get_corpus_entry(name).spec;
}

std::vector<std::string> list_problems() {
    std::vector<std::string> names;
    for (const auto& [name, entry] : registry())
        names.push_back(name);
    return names;
}

std::vector<Vector> uniform_starts(const ProblemSpec& problem, int count, StartMode mode,
                                   std::uint64_t seed) {
    if (count < 1)
        throw Error("uniform_starts: count must be at least 1");
    if (!problem.box)
        throw UnsupportedProblem(problem.name + ": start generation requires box bounds");
    const Vector& lo = problem.box->lower;
    const Vector& hi = problem.box->upper;
    const int n = problem.n;
    std::vector<Vector> starts;
    starts.reserve(static_cast<std::size_t>(count));

    if (mode == StartMode::Random) {
        Rng rng(seed);
        for (int i = 0; i < count; ++i) {
            Vector x(n);
            for (int j = 0; j < n; ++j)
                x[j] = lo[j] + (hi[j] - lo[j]) * rng.next_double();
            starts.push_back(std::move(x));
        }
        return starts;
    }

    // Smallest per-axis count c with c^n >= count.
    int per_axis = 1;
    while (std::pow(static_cast<double>(per_axis), n) < static_cast<double>(count))
        ++per_axis;
    for (int index = 0; index < count; ++index) {
        Vector x(n);
        int rest = index;
        for (int j = n - 1; j >= 0; --j) {
            const int digit = rest % per_axis;
            rest /= per_axis;
            x[j] = per_axis == 1
                       ? 0.5 * (lo[j] + hi[j])
                       : lo[j] + (hi[j] - lo[j]) * digit / static_cast<double>(per_axis - 1);
        }
        starts.push_back(std::move(x));
    }
    return starts;
}

GradientCheckResult check_gradients(const ProblemSpec& problem, int samples,
                                    std::uint64_t seed) {
    if (!problem.box)
        throw UnsupportedProblem(problem.name + ": gradient check requires box bounds");
    Rng rng(seed);
    const Vector& lo = problem.box->lower;
    const Vector& hi = problem.box->upper;
    GradientCheckResult result;
    result.pass = true;
    result.samples = samples;
    for (int s = 0; s < samples; ++s) {
        Vector x(problem.n);
        for (int j = 0; j < problem.n; ++j) {
            const double margin = 1e-3 * (hi[j] - lo[j]);
            x[j] = lo[j] + margin + (hi[j] - lo[j] - 2.0 * margin) * rng.next_double();
        }
        const EvalRecord rec = evaluate(problem, x);
        const auto [jf, jg] = fd_jacobians(problem, x, 1e-6);
        auto check = [&result](const Matrix& analytic, const Matrix& fd) {
            for (Eigen::Index r = 0; r < analytic.rows(); ++r) {
                for (Eigen::Index c = 0; c < analytic.cols(); ++c) {
                    const double err = std::abs(analytic(r, c) - fd(r, c));
                    const double tol =
                        1e-7 + 1e-5 * std::max(std::abs(analytic(r, c)), std::abs(fd(r, c)));
                    result.max_error = std::max(result.max_error, err - tol);
                    if (err > tol)
                        result.pass = false;
                }
            }
        };
        check(rec.jf, jf);
        check(rec.jg, jg);
    }
    return result;
}

} // namespace motun
