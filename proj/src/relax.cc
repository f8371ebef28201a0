#include <pcsp/relax.hh>

#include <pcsp/conditions.hh>
#include <pcsp/freestruct.hh>
#include <pcsp/indicator.hh>

#include <sstream>

using std::optional;
using std::size_t;
using std::string;
using std::to_string;
using std::uint64_t;
using std::vector;

namespace pcsp
{
    namespace
    {
        auto scope_name(std::span<const Element> scope) -> string
        {
            string s;
            for (size_t i = 0 ; i < scope.size() ; ++i) {
                if (i)
                    s += ",";
                s += to_string(scope[i]);
            }
            return s;
        }

        auto emit(const Structure & instance, const Structure & a, const EmitOptions & options, SystemMode mode) -> LinearSystem
        {
            if (! instance.similar_to(a))
                throw SignatureMismatch("instance and template are not similar");
            bool boolean = options.simplify_boolean;
            if (boolean && a.domain_size() != 2)
                throw Error("the Boolean rewrite needs a two-element template");

            LinearSystem s;
            s.mode = mode;
            s.boolean_simplified = boolean;
            size_t n = instance.domain_size(), d = a.domain_size();
            uint64_t vars = saturating_mul(n, d);
            for (size_t r = 0 ; r < instance.relation_count() ; ++r)
                vars = saturating_add(vars, saturating_mul(instance.relation(r).size(), a.relation(r).size()));
            check_size_cap("relaxation of " + instance.name(), vars, 0);

            // vertex[v][x] is the index of mu[v][x], or -1 when eliminated
            vector<vector<int64_t>> vertex(n, vector<int64_t>(d, -1));
            for (Element v = 0 ; v < n ; ++v)
                for (Element x = boolean ? 1 : 0 ; x < d ; ++x) {
                    vertex[v][x] = s.variables.size();
                    s.variables.push_back(RelaxVariable{ v, x, 0, {}, 0, "mu[" + to_string(v) + "][" + to_string(x) + "]" });
                }

            if (! boolean)
                for (Element v = 0 ; v < n ; ++v) {
                    LinearEquation e;
                    for (Element x = 0 ; x < d ; ++x)
                        e.terms.emplace_back(vertex[v][x], 1);
                    e.rhs = 1;
                    s.equations.push_back(std::move(e));
                }

            for (size_t r = 0 ; r < instance.relation_count() ; ++r) {
                auto & rel = instance.relation(r);
                auto & allowed = a.relation(r);
                auto & rname = instance.signature()[r].name;
                for (size_t j = 0 ; j < rel.size() ; ++j) {
                    auto scope = rel.tuple(j);
                    size_t first = s.variables.size();
                    for (size_t t = 0 ; t < allowed.size() ; ++t)
                        s.variables.push_back(RelaxVariable{ 0, 0, r, Tuple(scope.begin(), scope.end()), t,
                                "mu[" + scope_name(scope) + "][" + rname + "][" + to_string(t) + "]" });
                    for (unsigned i = 0 ; i < rel.arity() ; ++i)
                        for (Element x = 0 ; x < d ; ++x) {
                            LinearEquation e;
                            for (size_t t = 0 ; t < allowed.size() ; ++t)
                                if (allowed.tuple(t)[i] == x)
                                    e.terms.emplace_back(first + t, 1);
                            if (vertex[scope[i]][x] >= 0) {
                                e.terms.emplace_back(vertex[scope[i]][x], -1);
                                e.rhs = 0;
                            }
                            else {
                                // mu[v][0] = 1 - mu[v][1]
                                e.terms.emplace_back(vertex[scope[i]][1], 1);
                                e.rhs = 1;
                            }
                            s.equations.push_back(std::move(e));
                        }
                }
            }
            return s;
        }
    }

    auto emit_blp(const Structure & instance, const Structure & a, const EmitOptions & options) -> LinearSystem
    {
        return emit(instance, a, options, SystemMode::rational_nonneg);
    }

    auto emit_aip(const Structure & instance, const Structure & a, const EmitOptions & options) -> LinearSystem
    {
        return emit(instance, a, options, SystemMode::integer);
    }

    auto serialize_system(const LinearSystem & s) -> string
    {
        std::ostringstream out;
        for (auto & e : s.equations) {
            bool first = true;
            for (auto & [v, c] : e.terms) {
                if (! first)
                    out << " ";
                out << (c < 0 ? "-" : first ? "" : "+") << mpz_class(abs(c)).get_str() << "*" << s.variables[v].name;
                first = false;
            }
            if (first)
                out << "0";
            out << " = " << e.rhs.get_str() << "\n";
        }
        return out.str();
    }

    auto check_solution(const LinearSystem & s, const RelaxSolution & x) -> bool
    {
        if (x.values.size() != s.variables.size())
            return false;
        for (auto & v : x.values) {
            if (s.mode == SystemMode::rational_nonneg && v < 0)
                return false;
            if (s.mode == SystemMode::integer && v.get_den() != 1)
                return false;
        }
        for (auto & e : s.equations) {
            mpq_class sum = 0;
            for (auto & [v, c] : e.terms)
                sum += c * x.values[v];
            if (sum != e.rhs)
                return false;
        }
        return true;
    }

    auto check_infeasibility(const LinearSystem & s, const Infeasibility & z) -> bool
    {
        if (z.multipliers.size() != s.equations.size())
            return false;
        vector<mpq_class> combo(s.variables.size(), 0);
        mpq_class rhs = 0;
        for (size_t i = 0 ; i < s.equations.size() ; ++i) {
            for (auto & [v, c] : s.equations[i].terms)
                combo[v] += z.multipliers[i] * c;
            rhs += z.multipliers[i] * s.equations[i].rhs;
        }
        if (s.mode == SystemMode::rational_nonneg) {
            for (auto & c : combo)
                if (c < 0)
                    return false;
            return rhs < 0;
        }
        for (auto & c : combo)
            if (c.get_den() != 1)
                return false;
        return rhs.get_den() != 1;
    }

    auto lp_feasible(const LinearSystem & s) -> RelaxResult
    {
        size_t m = s.equations.size(), n = s.variables.size(), cols = n + m;
        RelaxResult result;

        // tableau over x and one artificial per row, last column the right hand side
        vector<vector<mpq_class>> t(m, vector<mpq_class>(cols + 1, 0));
        vector<int> sign(m, 1);
        for (size_t i = 0 ; i < m ; ++i) {
            auto & e = s.equations[i];
            if (e.rhs < 0)
                sign[i] = -1;
            for (auto & [v, c] : e.terms)
                t[i][v] += sign[i] * c;
            t[i][n + i] = 1;
            t[i][cols] = sign[i] * e.rhs;
        }
        vector<size_t> basis(m);
        for (size_t i = 0 ; i < m ; ++i)
            basis[i] = n + i;
        // reduced costs of the phase-one objective, sum of artificials
        vector<mpq_class> cost(cols + 1, 0);
        for (size_t j = 0 ; j < n ; ++j)
            for (size_t i = 0 ; i < m ; ++i)
                cost[j] -= t[i][j];
        for (size_t i = 0 ; i < m ; ++i)
            cost[cols] -= t[i][cols];

        while (true) {
            // Bland: smallest entering index, smallest leaving basis index among ties
            size_t enter = cols;
            for (size_t j = 0 ; j < cols ; ++j)
                if (cost[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter == cols)
                break;
            optional<size_t> leave;
            mpq_class best;
            for (size_t i = 0 ; i < m ; ++i)
                if (t[i][enter] > 0) {
                    mpq_class ratio = t[i][cols] / t[i][enter];
                    if (! leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
                        leave = i;
                        best = ratio;
                    }
                }
            if (! leave)
                throw Error("phase-one objective unbounded");
            size_t p = *leave;
            mpq_class pivot = t[p][enter];
            for (auto & x : t[p])
                x /= pivot;
            for (size_t i = 0 ; i < m ; ++i)
                if (i != p && t[i][enter] != 0) {
                    mpq_class f = t[i][enter];
                    for (size_t j = 0 ; j <= cols ; ++j)
                        if (t[p][j] != 0)
                            t[i][j] -= f * t[p][j];
                }
            if (cost[enter] != 0) {
                mpq_class f = cost[enter];
                for (size_t j = 0 ; j <= cols ; ++j)
                    if (t[p][j] != 0)
                        cost[j] -= f * t[p][j];
            }
            basis[p] = enter;
            ++result.pivots;
        }

        // objective value is -cost[cols]
        if (cost[cols] == 0) {
            RelaxSolution x{ vector<mpq_class>(n, 0) };
            for (size_t i = 0 ; i < m ; ++i)
                if (basis[i] < n)
                    x.values[basis[i]] = t[i][cols];
            result.feasible = true;
            result.verified = check_solution(s, x);
            result.solution = std::move(x);
        }
        else {
            // dual y_i = 1 - reduced cost of artificial i, on the sign-adjusted rows; A^T y <= 0, b^T y > 0
            Infeasibility z;
            for (size_t i = 0 ; i < m ; ++i)
                z.multipliers.push_back(-(1 - cost[n + i]) * sign[i]);
            result.feasible = false;
            result.verified = check_infeasibility(s, z);
            result.certificate = std::move(z);
        }
        return result;
    }

    auto hermite_normal_form(const vector<vector<mpz_class>> & a, size_t columns) -> HermiteForm
    {
        size_t m = a.size(), n = columns;
        HermiteForm f;
        f.h.assign(n, vector<mpz_class>(m, 0));
        for (size_t i = 0 ; i < m ; ++i)
            for (size_t j = 0 ; j < n ; ++j)
                f.h[j][i] = a[i][j];
        f.u.assign(n, vector<mpz_class>(n, 0));
        for (size_t j = 0 ; j < n ; ++j)
            f.u[j][j] = 1;

        auto combine = [&] (size_t k, size_t j, const mpz_class & p, const mpz_class & q, const mpz_class & r, const mpz_class & s) {
            // (col_k, col_j) <- (p col_k + q col_j, r col_k + s col_j)
            for (auto * mat : { &f.h, &f.u }) {
                auto & ck = (*mat)[k];
                auto & cj = (*mat)[j];
                for (size_t i = 0 ; i < ck.size() ; ++i) {
                    mpz_class x = p * ck[i] + q * cj[i];
                    mpz_class y = r * ck[i] + s * cj[i];
                    ck[i] = std::move(x);
                    cj[i] = std::move(y);
                }
            }
        };

        size_t k = 0;
        for (size_t i = 0 ; i < m && k < n ; ++i) {
            for (size_t j = k + 1 ; j < n ; ++j) {
                if (f.h[j][i] == 0)
                    continue;
                if (f.h[k][i] == 0) {
                    std::swap(f.h[k], f.h[j]);
                    std::swap(f.u[k], f.u[j]);
                    continue;
                }
                mpz_class g, s, t;
                mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), f.h[k][i].get_mpz_t(), f.h[j][i].get_mpz_t());
                mpz_class ak = f.h[k][i] / g, aj = f.h[j][i] / g;
                combine(k, j, s, t, -aj, ak);
            }
            if (f.h[k][i] == 0)
                continue;
            if (f.h[k][i] < 0)
                for (auto * mat : { &f.h, &f.u })
                    for (auto & x : (*mat)[k])
                        x = -x;
            for (size_t l = 0 ; l < k ; ++l) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), f.h[l][i].get_mpz_t(), f.h[k][i].get_mpz_t());
                if (q != 0)
                    for (auto * mat : { &f.h, &f.u })
                        for (size_t r = 0 ; r < (*mat)[l].size() ; ++r)
                            (*mat)[l][r] -= q * (*mat)[k][r];
            }
            f.pivot_rows.push_back(i);
            ++k;
        }
        return f;
    }

    auto ip_feasible(const LinearSystem & s) -> RelaxResult
    {
        size_t m = s.equations.size(), n = s.variables.size();
        vector<vector<mpz_class>> a(m, vector<mpz_class>(n, 0));
        for (size_t i = 0 ; i < m ; ++i)
            for (auto & [v, c] : s.equations[i].terms)
                a[i][v] += c;
        auto f = hermite_normal_form(a, n);
        auto & h = f.h;
        RelaxResult result;

        // z supported on the pivot rows of columns 0..k-1 (plus optionally one extra row with weight 1)
        // such that (z^T H)_l = target_l for l < k
        auto solve_left = [&] (size_t k, vector<mpq_class> target, optional<size_t> extra) {
            vector<mpq_class> z(m, 0);
            if (extra)
                z[*extra] = 1;
            for (size_t l = k ; l > 0 ; --l) {
                size_t c = l - 1;
                mpq_class acc = target[c];
                if (extra)
                    acc -= mpq_class(h[c][*extra]);
                for (size_t l2 = c + 1 ; l2 < k ; ++l2)
                    acc -= z[f.pivot_rows[l2]] * h[c][f.pivot_rows[l2]];
                z[f.pivot_rows[c]] = acc / h[c][f.pivot_rows[c]];
            }
            return z;
        };
        auto finish_certificate = [&] (vector<mpq_class> z) {
            Infeasibility c{ std::move(z) };
            result.feasible = false;
            result.verified = check_infeasibility(s, c);
            result.certificate = std::move(c);
            return result;
        };

        vector<mpz_class> y;
        size_t k = 0;
        for (size_t i = 0 ; i < m ; ++i) {
            mpq_class acc = s.equations[i].rhs;
            for (size_t l = 0 ; l < k ; ++l)
                acc -= h[l][i] * y[l];
            if (k < f.pivot_rows.size() && f.pivot_rows[k] == i) {
                mpq_class yk = acc / h[k][i];
                if (yk.get_den() != 1) {
                    vector<mpq_class> target(k + 1, 0);
                    target[k] = 1;
                    return finish_certificate(solve_left(k + 1, target, std::nullopt));
                }
                y.push_back(yk.get_num());
                ++k;
            }
            else if (acc != 0) {
                auto z = solve_left(k, vector<mpq_class>(k, 0), i);
                mpq_class zb = 0;
                for (size_t r = 0 ; r < m ; ++r)
                    zb += z[r] * s.equations[r].rhs;
                for (auto & x : z)
                    x /= 2 * zb;
                return finish_certificate(std::move(z));
            }
        }

        RelaxSolution x{ vector<mpq_class>(n, 0) };
        for (size_t l = 0 ; l < y.size() ; ++l)
            for (size_t v = 0 ; v < n ; ++v)
                x.values[v] += f.u[l][v] * y[l];
        result.feasible = true;
        result.verified = check_solution(s, x);
        result.solution = std::move(x);
        return result;
    }

    auto solution_from_hom(const LinearSystem & s, const Structure & instance, const Structure & a,
            const Homomorphism & h) -> RelaxSolution
    {
        if (! is_homomorphism(h, instance, a))
            throw Error("map is not a homomorphism");
        RelaxSolution x;
        for (auto & v : s.variables) {
            bool one;
            if (v.scope.empty())
                one = h[v.v] == v.value;
            else {
                auto t = a.relation(v.relation).tuple(v.tuple);
                one = true;
                for (size_t i = 0 ; i < v.scope.size() ; ++i)
                    one = one && h[v.scope[i]] == t[i];
            }
            x.values.emplace_back(one ? 1 : 0);
        }
        return x;
    }

    auto method_name(RelaxMethod m) -> string
    {
        switch (m) {
            case RelaxMethod::gac: return "gac";
            case RelaxMethod::blp: return "blp";
            case RelaxMethod::aip: return "aip";
        }
        return "?";
    }

    auto parse_method(const string & s) -> RelaxMethod
    {
        if (s == "gac")
            return RelaxMethod::gac;
        if (s == "blp")
            return RelaxMethod::blp;
        if (s == "aip")
            return RelaxMethod::aip;
        throw Error("unknown method " + s);
    }

    auto solve_promise(const PromiseTemplate & t, const Structure & instance, RelaxMethod method,
            const PromiseOptions & options) -> PromiseAnswer
    {
        if (! t.a.similar_to(t.b))
            throw SignatureMismatch("template structures are not similar");
        PromiseAnswer answer;
        answer.method = method;

        if (method == RelaxMethod::gac) {
            answer.arc_consistent = gac(instance, t.a);
            answer.yes = answer.arc_consistent.has_value();
            if (answer.yes) {
                answer.yes_sound = width1_check(t).holds;
                answer.characterization = answer.yes_sound ? "power structure maps to B" : "power structure does not map to B";
            }
            return answer;
        }

        auto sys = method == RelaxMethod::blp ? emit_blp(instance, t.a, options.emit) : emit_aip(instance, t.a, options.emit);
        answer.relaxation = method == RelaxMethod::blp ? lp_feasible(sys) : ip_feasible(sys);
        answer.yes = answer.relaxation->feasible;
        if (! answer.yes)
            return answer;

        ConditionCheckOptions check;
        check.search.node_budget = options.node_budget;
        answer.yes_sound = options.characterization_arity >= 2;
        string tested;
        for (unsigned n = method == RelaxMethod::blp ? 2 : 3 ; n <= options.characterization_arity ;
                n += method == RelaxMethod::blp ? 1 : 2) {
            auto c = method == RelaxMethod::blp ? symmetric_condition(n) : alternating_condition(n);
            auto r = check_condition_in_pol(c, t, check);
            tested += (tested.empty() ? "" : ", ") + c.name() + " " + verdict_name(r.verdict);
            if (r.verdict != Verdict::sat)
                answer.yes_sound = false;
        }
        answer.characterization = tested.empty() ? "not tested" : tested;
        return answer;
    }
}
