// Command line front end: lattice data, Jacobi/Siegel coefficients, the exact
// symmetry tests and the numerical theta/Green checks.
//
// Exit codes: 0 ok/match, 2 usage or invalid input, 3 symmetry mismatch,
// 4 numeric tolerance exceeded, 5 enumeration budget exceeded.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "orthosym/errors.hpp"
#include "orthosym/forms.hpp"
#include "orthosym/green.hpp"
#include "orthosym/lattice.hpp"
#include "orthosym/symmetry.hpp"
#include "orthosym/theta.hpp"

using namespace orthosym;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitTolerance = 4;
constexpr int kExitBudget = 5;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "a+bi", "a-bi", "bi", "i", "-i", "a".
Complex parse_complex(const std::string& text) {
    static const std::regex full(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*i)?\s*$)");
    static const std::regex imag_only(R"(^\s*([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*i\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, imag_only)) {
        const double b = m[2].matched ? std::stod(m[2].str()) : 1.0;
        return {0.0, m[1].str() == "-" ? -b : b};
    }
    if (std::regex_match(text, m, full) && (m[1].matched || m[2].matched)) {
        const double a = m[1].matched ? std::stod(m[1].str()) : 0.0;
        double b = 0.0;
        if (m[2].matched) {
            b = m[3].matched ? std::stod(m[3].str()) : 1.0;
            if (m[2].str() == "-") b = -b;
        }
        return {a, b};
    }
    throw UsageError("cannot parse complex number '" + text + "' (expected a+bi)");
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

// "z;w1,...,wm;z'" with an empty middle part for m = 0.
TubePoint parse_Z(const LatticeSpace& L, const std::string& text) {
    const auto parts = split(text, ';');
    if (parts.size() != 3) throw UsageError("Z must have the form \"z;w1,...,wm;z'\"");
    ComplexVector w;
    if (!parts[1].empty())
        for (const auto& item : split(parts[1], ',')) w.push_back(parse_complex(item));
    if (static_cast<int>(w.size()) != L.m())
        throw UsageError("Z has " + std::to_string(w.size()) + " w-entries, lattice needs " + std::to_string(L.m()));
    return tube_point(L, parse_complex(parts[0]), w, parse_complex(parts[2]));
}

std::string complex_str(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g%+.15gi", z.real(), z.imag());
    return buf;
}

struct LatticeOptions {
    std::string file;
    std::string preset = "m0";

    void add(CLI::App* app) {
        app->add_option("--lattice", file, "JSON file {\"S\": [[...], ...]} with an even positive definite Gram matrix");
        app->add_option("--preset", preset, "built-in lattice: m0 (S empty) or m1s2 (S = (2))")
            ->check(CLI::IsMember({"m0", "m1s2"}));
    }

    LatticeSpace build() const {
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) throw UsageError("cannot open lattice file " + file);
            const json j = json::parse(in);
            const auto& rows = j.at("S");
            const int m = static_cast<int>(rows.size());
            IntMatrix S(m, m);
            for (int i = 0; i < m; ++i) {
                if (static_cast<int>(rows[i].size()) != m) throw UsageError("S must be square");
                for (int k = 0; k < m; ++k) S(i, k) = rows[i][k].get<std::int64_t>();
            }
            return LatticeSpace::build(S);
        }
        if (preset == "m1s2") {
            IntMatrix S(1, 1);
            S(0, 0) = 2;
            return LatticeSpace::build(S);
        }
        return LatticeSpace::build(IntMatrix(0, 0));
    }
};

enum class Format { Text, Json, Csv };

struct Output {
    std::string format = "text";
    bool json_flag = false;

    void add(CLI::App* app) {
        app->add_option("--format", format, "output format: text, json or csv")
            ->check(CLI::IsMember({"text", "json", "csv"}));
        app->add_flag("--json", json_flag, "shorthand for --format json");
    }
    Format get() const {
        if (json_flag || format == "json") return Format::Json;
        return format == "csv" ? Format::Csv : Format::Text;
    }
};

// Flat key/value records; every subcommand reports through this.
void emit(Format format, const json& data) {
    if (format == Format::Json) {
        std::cout << data.dump(2) << '\n';
        return;
    }
    auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (format == Format::Csv) {
        if (data.contains("rows")) {
            const auto& rows = data.at("rows");
            if (!rows.empty()) {
                bool first = true;
                for (const auto& [k, v] : rows[0].items()) {
                    std::cout << (first ? "" : ",") << k;
                    first = false;
                }
                std::cout << '\n';
                for (const auto& row : rows) {
                    first = true;
                    for (const auto& [k, v] : row.items()) {
                        std::cout << (first ? "" : ",") << scalar(v);
                        first = false;
                    }
                    std::cout << '\n';
                }
            }
            return;
        }
        std::cout << "key,value\n";
        for (const auto& [k, v] : data.items()) std::cout << k << ',' << scalar(v) << '\n';
        return;
    }
    for (const auto& [k, v] : data.items()) {
        if (k == "rows") {
            for (const auto& row : v) {
                bool first = true;
                for (const auto& [rk, rv] : row.items()) {
                    std::cout << (first ? "" : "  ") << rk << '=' << scalar(rv);
                    first = false;
                }
                std::cout << '\n';
            }
        } else {
            std::cout << k << ": " << scalar(v) << '\n';
        }
    }
}

const DiscCoset& coset_at(const LatticeSpace& L, int index) {
    const auto& reps = L.discriminant_reps();
    if (index < 0 || index >= static_cast<int>(reps.size()))
        throw UsageError("coset index out of range (|L*/L| = " + std::to_string(reps.size()) + ")");
    return reps[index];
}

json rational_vector(const RationalVector& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(to_string(x));
    return out;
}

json cell_json(const Cell& c) { return json::array({to_string(c.n), to_string(c.r), to_string(c.m)}); }

// Evaluation tolerance for the individual theta sums behind a check at `tol`.
double eval_tol(double tol) { return std::max(tol * 1e-2, 1e-12); }

SiegelSeries form_by_name(const std::string& name, std::int64_t n_trunc, std::int64_t m_trunc) {
    return chi_form(name == "chi10" ? 10 : 12, n_trunc, m_trunc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orthogonal modular forms: coefficient tables, symmetry tests and theta/Green numerics"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker threads for lattice sums (results may differ by rounding)")
        ->check(CLI::PositiveNumber);

    int exit_code = 0;
    std::function<void()> action;

    // lattice
    auto* lattice_cmd = app.add_subcommand("lattice", "lattice data")->require_subcommand(1);
    LatticeOptions lat_info;
    Output out_info;
    auto* info = lattice_cmd->add_subcommand("info", "signature, discriminant group and Weil representation");
    lat_info.add(info);
    out_info.add(info);
    info->callback([&] {
        action = [&] {
            const LatticeSpace L = lat_info.build();
            json rows = json::array();
            for (const auto& c : L.discriminant_reps())
                rows.push_back({{"index", c.index}, {"rep", rational_vector(c.rep)}, {"q_mod1", to_string(c.q_mod1)}});
            const WeilRep w = weil_representation(L);
            json rhoS = json::array();
            for (int i = 0; i < w.dim; ++i) {
                json row = json::array();
                for (int k = 0; k < w.dim; ++k) row.push_back(complex_str(w.rhoS(i, k)));
                rhoS.push_back(row);
            }
            json d{{"m", L.m()},
                   {"rank", L.rank()},
                   {"signature", "(2," + std::to_string(L.m() + 2) + ")"},
                   {"det_S", L.det_S()},
                   {"discriminant_order", L.discriminant_reps().size()},
                   {"rhoS", rhoS},
                   {"rows", rows}};
            emit(out_info.get(), d);
        };
    });

    // forms
    auto* forms_cmd = app.add_subcommand("forms", "Jacobi forms and Saito-Kurokawa lifts")->require_subcommand(1);
    int jk = 10;
    std::int64_t jn = 3;
    Output out_j;
    auto* jac = forms_cmd->add_subcommand("jacobi", "coefficients c(n, r) of E_{4,1}, E_{6,1}, phi_{10,1}, phi_{12,1}");
    jac->add_option("--k", jk, "weight: 4, 6 (Eisenstein) or 10, 12 (cusp forms)")->check(CLI::IsMember({4, 6, 10, 12}));
    jac->add_option("--nmax", jn, "largest q-exponent n")->check(CLI::NonNegativeNumber);
    out_j.add(jac);
    jac->callback([&] {
        action = [&] {
            const JacobiSeries phi = jk <= 6 ? jacobi_eisenstein(jk, jn) : phi_cusp(jk, jn);
            json rows = json::array();
            for (const auto& [key, value] : phi.coeffs.terms())
                rows.push_back({{"n", key[0]}, {"r", key[1]}, {"c", to_string(value)}});
            emit(out_j.get(), json{{"weight", jk}, {"index", 1}, {"nmax", jn}, {"rows", rows}});
        };
    });
    int sk_k = 10;
    std::int64_t sk_n = 3, sk_m = 3;
    Output out_sk;
    auto* sk = forms_cmd->add_subcommand("sk", "Saito-Kurokawa lift A(n, r, m) of phi_{10,1} or phi_{12,1}");
    sk->add_option("--k", sk_k, "weight 10 or 12")->check(CLI::IsMember({10, 12}));
    sk->add_option("--nmax", sk_n, "largest n")->check(CLI::PositiveNumber);
    sk->add_option("--mmax", sk_m, "largest m")->check(CLI::PositiveNumber);
    out_sk.add(sk);
    sk->callback([&] {
        action = [&] {
            const SiegelSeries F = chi_form(sk_k, sk_n, sk_m);
            json rows = json::array();
            for (const auto& [key, value] : F.coeffs.terms())
                rows.push_back({{"n", key[0]}, {"r", key[1]}, {"m", key[2]}, {"A", to_string(value)}});
            emit(out_sk.get(), json{{"weight", sk_k}, {"nmax", sk_n}, {"mmax", sk_m}, {"rows", rows}});
        };
    });

    // symmetry
    auto* sym_cmd = app.add_subcommand("symmetry", "exact symmetry tests on chi_10 and chi_12")->require_subcommand(1);
    std::string form = "chi10";
    auto form_option = [&](CLI::App* c) {
        c->add_option("--form", form, "chi10 or chi12")->check(CLI::IsMember({"chi10", "chi12"}));
    };
    Output out_table;
    auto* table = sym_cmd->add_subcommand("table", "p = 2 up/down coefficients at (n, r, m) = (4, r, 3), r = 0..3");
    form_option(table);
    out_table.add(table);
    table->callback([&] {
        action = [&] {
            const SiegelSeries F = form_by_name(form, 3, 3);
            json rows = json::array();
            for (const auto& [r, ud] : table_4_r_3(F))
                rows.push_back({{"r", r}, {"up", to_string(ud.first)}, {"down", to_string(ud.second)}});
            emit(out_table.get(), json{{"form", form}, {"p", 2}, {"n", 4}, {"m", 3}, {"rows", rows}});
        };
    });

    int sym_p = 2;
    std::int64_t n_lo = 1, n_hi = 3, m_lo = 1, m_hi = 3;
    std::optional<std::int64_t> r_lo, r_hi;
    auto range_options = [&](CLI::App* c) {
        c->add_option("--p", sym_p, "prime")->check(CLI::IsMember({2, 3, 5}));
        c->add_option("--nmin", n_lo, "smallest n of the compared cells");
        c->add_option("--nmax", n_hi, "largest n of the compared cells");
        c->add_option("--mmin", m_lo, "smallest m");
        c->add_option("--mmax", m_hi, "largest m");
        c->add_option("--rmin", r_lo, "smallest r (default: every r with a nonzero coefficient)");
        c->add_option("--rmax", r_hi, "largest r");
    };
    auto range_from_flags = [&] {
        CellRange range;
        range.n_lo = n_lo;
        range.n_hi = n_hi;
        range.m_lo = m_lo;
        range.m_hi = m_hi;
        if (r_lo || r_hi) {
            if (!r_lo || !r_hi) throw UsageError("--rmin and --rmax go together");
            range.r = std::make_pair(*r_lo, *r_hi);
        }
        return range;
    };
    auto report_json = [](const SymmetryReport& rep) {
        json d{{"kind", rep.kind == SymmetryReport::Kind::Additive ? "additive" : "multiplicative"},
               {"p", rep.p},
               {"matched", rep.matched},
               {"cells_compared", rep.cells_compared}};
        // A ratio other than +-1 at the first cell is already the mismatch.
        if (rep.epsilon) d[*rep.epsilon == 1 || *rep.epsilon == -1 ? "epsilon" : "ratio"] = to_string(*rep.epsilon);
        if (rep.witness) {
            d["witness_cell"] = cell_json(rep.witness->cell);
            d["witness_up"] = to_string(rep.witness->lhs);
            d["witness_down"] = to_string(rep.witness->rhs);
        }
        return d;
    };
    // Smallest lift truncation for which the range is certified.
    auto run_symmetry = [&](bool additive) {
        const CellRange range = range_from_flags();
        const std::int64_t start = std::max(range.n_hi, range.m_hi);
        for (std::int64_t N = start; N <= sym_p * start + 4; ++N) {
            try {
                const SiegelSeries F = form_by_name(form, N, N);
                return additive ? additive_symmetry_test(F, sym_p, range)
                                : multiplicative_symmetry_test(F, sym_p, range);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::InsufficientTruncation) throw;
            }
        }
        throw Error(ErrorKind::InsufficientTruncation, "no lift truncation certifies the requested range");
    };
    Output out_add;
    auto* add = sym_cmd->add_subcommand("additive", "exact comparison of the additive up/down operators");
    form_option(add);
    range_options(add);
    out_add.add(add);
    add->callback([&] {
        action = [&] {
            const SymmetryReport rep = run_symmetry(true);
            json d = report_json(rep);
            d["form"] = form;
            emit(out_add.get(), d);
            if (!rep.matched) exit_code = kExitMismatch;
        };
    });
    Output out_mul;
    auto* mul = sym_cmd->add_subcommand("multiplicative",
                                        "F_up = epsilon F_down test; default cells (4, r, 3), r = 0..3");
    form_option(mul);
    range_options(mul);
    out_mul.add(mul);
    mul->callback([&] {
        action = [&] {
            if (mul->count("--nmin") + mul->count("--nmax") + mul->count("--mmin") + mul->count("--mmax") == 0) {
                n_lo = n_hi = 4;
                m_lo = m_hi = 3;
                if (!r_lo && !r_hi) {
                    r_lo = 0;
                    r_hi = 3;
                }
            }
            const SymmetryReport rep = run_symmetry(false);
            json d = report_json(rep);
            d["form"] = form;
            emit(out_mul.get(), d);
            if (!rep.matched) exit_code = kExitMismatch;
        };
    });

    // theta
    auto* theta_cmd = app.add_subcommand("theta", "Siegel theta functions and their identities")->require_subcommand(1);
    LatticeOptions lat_theta;
    std::string tau_text = "0.3+1.1i", Z_text;
    double tol = 1e-8;
    std::optional<int> coset_index;
    Output out_theta;
    auto theta_common = [&](CLI::App* c, const char* tol_help) {
        lat_theta.add(c);
        c->add_option("--tau", tau_text, "tau in the upper half plane, written a+bi");
        c->add_option("--Z", Z_text, "tube point \"z;w1,...,wm;z'\" (complex entries a+bi, empty w for m = 0)")
            ->required();
        c->add_option("--tol", tol, tol_help)->check(CLI::PositiveNumber);
        out_theta.add(c);
    };
    auto cosets_for = [&](const LatticeSpace& L) {
        std::vector<DiscCoset> out;
        if (coset_index)
            out.push_back(coset_at(L, *coset_index));
        else
            out = L.discriminant_reps();
        return out;
    };
    auto check_tol = [&](double diff) {
        if (!(diff <= tol)) exit_code = kExitTolerance;
    };

    auto* t_eval = theta_cmd->add_subcommand("eval", "Theta_alpha(tau, Z) with a certified tail bound");
    theta_common(t_eval, "absolute bound on the omitted terms");
    t_eval->add_option("--coset", coset_index, "coset index in L*/L (see lattice info); default 0");
    std::uint64_t cap = EllipsoidEnumerator::kDefaultCap;
    t_eval->add_option("--cap", cap, "maximum number of enumerated lattice points")->check(CLI::PositiveNumber);
    t_eval->callback([&] {
        action = [&] {
            const LatticeSpace L = lat_theta.build();
            ThetaParams params;
            params.tau = parse_complex(tau_text);
            params.Z = parse_Z(L, Z_text);
            params.coset = coset_at(L, coset_index.value_or(0));
            params.tol = tol;
            params.cap = cap;
            params.threads = threads;
            const ThetaValue v = siegel_theta(L, params);
            emit(out_theta.get(), json{{"value_re", v.value.real()},
                                       {"value_im", v.value.imag()},
                                       {"tail_bound", v.tail_bound},
                                       {"terms", v.terms}});
        };
    });

    int theta_p = 2;
    auto* t_sym = theta_cmd->add_subcommand("sym", "additive symmetry (z <-> z') at a prime p");
    theta_common(t_sym, "allowed absolute difference");
    t_sym->add_option("--p", theta_p, "prime")->check(CLI::IsMember({2, 3, 5, 7}));
    t_sym->add_option("--coset", coset_index, "coset index; default all cosets");
    t_sym->callback([&] {
        action = [&] {
            const LatticeSpace L = lat_theta.build();
            const Complex tau = parse_complex(tau_text);
            const TubePoint Z = parse_Z(L, Z_text);
            json rows = json::array();
            double worst = 0;
            for (const auto& c : cosets_for(L)) {
                const IdentityCheck chk = theta_additive_symmetry_check(L, c, tau, Z, theta_p, eval_tol(tol), threads);
                worst = std::max(worst, chk.abs_diff);
                rows.push_back({{"coset", c.index},
                                {"lhs", complex_str(chk.lhs)},
                                {"rhs", complex_str(chk.rhs)},
                                {"abs_diff", chk.abs_diff}});
            }
            emit(out_theta.get(), json{{"p", theta_p}, {"max_abs_diff", worst}, {"rows", rows}});
            check_tol(worst);
        };
    });

    std::string gen = "S";
    auto* t_mod = theta_cmd->add_subcommand("modularity", "vector-valued modularity under T or S");
    theta_common(t_mod, "allowed sup-norm difference");
    t_mod->add_option("--gen", gen, "generator T or S")->check(CLI::IsMember({"T", "S"}));
    t_mod->callback([&] {
        action = [&] {
            const LatticeSpace L = lat_theta.build();
            const double diff = theta_modularity_check(L, parse_complex(tau_text), parse_Z(L, Z_text),
                                                       gen == "T" ? Generator::T : Generator::S, eval_tol(tol),
                                                       threads);
            emit(out_theta.get(), json{{"generator", gen}, {"abs_diff", diff}});
            check_tol(diff);
        };
    });

    int cutoff = 0;
    auto* t_red = theta_cmd->add_subcommand("reduction", "Borcherds reduction to generalized theta functions of L_1");
    theta_common(t_red, "allowed absolute difference");
    t_red->add_option("--coset", coset_index, "coset index; default all cosets");
    t_red->add_option("--cutoff", cutoff, "box |c|, |d| <= cutoff; 0 chooses it from the tolerance")
        ->check(CLI::NonNegativeNumber);
    t_red->callback([&] {
        action = [&] {
            const LatticeSpace L = lat_theta.build();
            ThetaParams params;
            params.tau = parse_complex(tau_text);
            params.Z = parse_Z(L, Z_text);
            params.tol = eval_tol(tol);
            params.threads = threads;
            json rows = json::array();
            double worst = 0;
            for (const auto& c : cosets_for(L)) {
                params.coset = c;
                const IdentityCheck chk = borcherds_reduction_check(L, params, cutoff);
                worst = std::max(worst, chk.abs_diff);
                rows.push_back({{"coset", c.index},
                                {"lhs", complex_str(chk.lhs)},
                                {"rhs", complex_str(chk.rhs)},
                                {"abs_diff", chk.abs_diff}});
            }
            emit(out_theta.get(), json{{"max_abs_diff", worst}, {"rows", rows}});
            check_tol(worst);
        };
    });

    std::int64_t spin_c = 1, spin_d = 0;
    std::optional<int> spin_case;
    auto* t_spin = theta_cmd->add_subcommand("spin", "spin identities between the decorated generalized theta sums");
    theta_common(t_spin, "allowed absolute difference");
    t_spin->add_option("--p", theta_p, "prime")->check(CLI::IsMember({2, 3, 5, 7}));
    t_spin->add_option("--c", spin_c, "integer c");
    t_spin->add_option("--d", spin_d, "integer d");
    t_spin->add_option("--case", spin_case, "expected case (1: p does not divide both, 2: p | c and p | d)")
        ->check(CLI::IsMember({1, 2}));
    t_spin->add_option("--coset", coset_index, "coset index; default all cosets");
    t_spin->callback([&] {
        action = [&] {
            const LatticeSpace L = lat_theta.build();
            const Complex tau = parse_complex(tau_text);
            const TubePoint Z = parse_Z(L, Z_text);
            json rows = json::array();
            double worst = 0;
            int case_number = 0;
            for (const auto& c : cosets_for(L)) {
                const SpinCheck chk =
                    spin_identity_check(L, c, tau, Z, theta_p, spin_c, spin_d, eval_tol(tol), spin_case, threads);
                case_number = chk.case_number;
                for (double d : chk.diffs) worst = std::max(worst, d);
                rows.push_back({{"coset", c.index}, {"diffs", chk.diffs}});
            }
            emit(out_theta.get(), json{{"p", theta_p}, {"case", case_number}, {"max_abs_diff", worst}, {"rows", rows}});
            check_tol(worst);
        };
    });

    // green
    auto* green_cmd = app.add_subcommand("green", "truncated automorphic Green function")->require_subcommand(1);
    LatticeOptions lat_green;
    int g_coset = 0;
    std::string g_n = "-1/4";
    double g_s = 0, g_R = 100, g_delta = 1e-6, g_tol = 1e-3;
    std::string g_Z;
    int g_p = 2;
    std::uint64_t g_cap = EllipsoidEnumerator::kDefaultCap;
    Output out_green;
    auto green_common = [&](CLI::App* c) {
        lat_green.add(c);
        c->add_option("--coset", g_coset, "coset index in L*/L");
        c->add_option("--n", g_n, "negative rational n = q(alpha) mod 1, e.g. -1/4");
        c->add_option("--s", g_s, "real s > kappa/2 (kappa = (m+4)/2); default kappa/2 + 2");
        c->add_option("--Z", g_Z, "tube point \"z;w1,...,wm;z'\"")->required();
        c->add_option("--R", g_R, "cutoff on q(lambda_Z)")->check(CLI::PositiveNumber);
        c->add_option("--cap", g_cap, "maximum number of enumerated lattice points")->check(CLI::PositiveNumber);
        c->add_option("--delta", g_delta, "divisor guard: reject q(lambda_Z) < delta |n|")->check(CLI::PositiveNumber);
        out_green.add(c);
    };
    auto green_params = [&](const LatticeSpace& L) {
        GreenParams g;
        g.coset = coset_at(L, g_coset);
        try {
            g.n = parse_rational(g_n);
        } catch (const std::exception&) {
            throw UsageError("cannot parse rational '" + g_n + "'");
        }
        g.s = g_s > 0 ? g_s : (L.m() + 4) / 4.0 + 2.0;
        g.Z = parse_Z(L, g_Z);
        g.R = g_R;
        g.delta = g_delta;
        g.cap = g_cap;
        g.threads = threads;
        return g;
    };
    auto* g_eval = green_cmd->add_subcommand("eval", "Phi_{alpha,n}(Z, s) truncated at q(lambda_Z) <= R");
    green_common(g_eval);
    g_eval->callback([&] {
        action = [&] {
            const LatticeSpace L = lat_green.build();
            const GreenValue v = green_function(L, green_params(L));
            emit(out_green.get(),
                 json{{"value", v.value}, {"terms_used", v.terms_used}, {"tail_estimate", v.tail_estimate}});
        };
    });
    auto* g_sym = green_cmd->add_subcommand("sym", "additive symmetry with the same cutoff R at every point");
    green_common(g_sym);
    g_sym->add_option("--p", g_p, "prime")->check(CLI::IsMember({2, 3, 5, 7}));
    g_sym->add_option("--tol", g_tol, "allowed relative difference")->check(CLI::PositiveNumber);
    g_sym->callback([&] {
        action = [&] {
            const LatticeSpace L = lat_green.build();
            const GreenSymmetry r = green_additive_symmetry_check(L, green_params(L), g_p);
            emit(out_green.get(), json{{"p", g_p}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"rel_diff", r.rel_diff}});
            if (!(r.rel_diff <= g_tol)) exit_code = kExitTolerance;
        };
    });

    // Global options such as --threads may follow the subcommand.
    std::function<void(CLI::App*)> fall = [&](CLI::App* a) {
        for (auto* sub : a->get_subcommands({})) {
            sub->fallthrough();
            fall(sub);
        }
    };
    fall(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (action) action();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::BudgetExceeded ? kExitBudget : kExitUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: bad JSON input: " << e.what() << '\n';
        return kExitUsage;
    }
    if (exit_code == kExitTolerance) std::cerr << "tolerance exceeded\n";
    if (exit_code == kExitMismatch) std::cerr << "symmetry mismatch\n";
    return exit_code;
}
