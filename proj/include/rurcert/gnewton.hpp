#pragma once

// Global Newton (Hensel-style) iteration on RUR coefficient vectors: the
// Phi map, its structured Jacobian, and the simultaneous update of the
// parametrizations and the modulus.

#include "rurcert/arith.hpp"
#include "rurcert/multipoly.hpp"
#include "rurcert/system.hpp"
#include "rurcert/unipoly.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rurcert {

struct AssumptionViolation : std::runtime_error {
    AssumptionViolation(int item_, std::string what_)
        : std::runtime_error("assumption item " + std::to_string(item_) + " violated: " + what_),
          item(item_) {}
    int item;
};

struct LambdaNotInvertible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T>
struct GlobalNewtonState {
    QuotientCtxT<T> ctx;                 // current modulus q
    std::vector<UniPoly<T>> v;           // parametrizations, reduced mod q
    std::vector<Rational> lambda;

    GlobalNewtonState(QuotientCtxT<T> c, std::vector<UniPoly<T>> vv, std::vector<Rational> l)
        : ctx(std::move(c)), v(std::move(vv)), lambda(std::move(l)) {}

    UniPoly<T> delta_q() const {  // q - T^d
        std::vector<T> td(static_cast<std::size_t>(ctx.degree()) + 1, field_traits<T>::zero());
        td.back() = field_traits<T>::one();
        return ctx.modulus - UniPoly<T>(std::move(td));
    }

    UniPoly<T> lambda_combination() const {  // sum_i lambda_i v_i
        UniPoly<T> acc;
        for (std::size_t i = 0; i < v.size(); ++i)
            acc = acc + field_traits<T>::from_rational(lambda[i]) * v[i];
        return acc;
    }
};

// Step-by-step trace entry for the structured report.
struct GlobalStepTrace {
    unsigned k = 0;
    double max_coeff_delta = 0.0;
    long lambda_degree = -1;
    bool assumptions_ok = false;
};

// Phi(v, Delta q) = (F_1(v) mod q, ..., F_n(v) mod q, sum lambda_i v_i - T).
template <class T>
std::vector<UniPoly<T>> phi_eval(const GlobalNewtonState<T>& state, const PolySystem& F) {
    std::vector<UniPoly<T>> out;
    out.reserve(F.size() + 1);
    for (const auto& f : F.polynomials) out.push_back(compose_mod(f, state.v, state.ctx));
    out.push_back(state.lambda_combination() - UniPoly<T>::identity());
    return out;
}

// F_i(v(T)) = m_i(T) q(T) + r_i(T), computed on the full unreduced
// composition so the quotients m_i are available.
template <class T>
std::pair<std::vector<UniPoly<T>>, std::vector<UniPoly<T>>> division_data(
    const GlobalNewtonState<T>& state, const PolySystem& F) {
    std::vector<UniPoly<T>> m, r;
    for (const auto& f : F.polynomials) {
        auto dr = divrem(compose_full(f, state.v), state.ctx.modulus);
        m.push_back(std::move(dr.quotient));
        r.push_back(std::move(dr.remainder));
    }
    return {std::move(m), std::move(r)};
}

// Block Jacobian of Phi: [[J_F(v(T)), -m(T)], [lambda^t, 0]] mod q(T).
template <class T>
std::vector<std::vector<UniPoly<T>>> phi_jacobian(const GlobalNewtonState<T>& state,
                                                  const PolySystem& F) {
    const std::size_t n = F.size();
    auto J = jacobian(F.polynomials);
    auto [m, r] = division_data(state, F);
    std::vector<std::vector<UniPoly<T>>> M(n + 1, std::vector<UniPoly<T>>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) M[i][j] = compose_mod(J[i][j], state.v, state.ctx);
        M[i][n] = -m[i];
    }
    for (std::size_t j = 0; j < n; ++j)
        M[n][j] = UniPoly<T>::constant(field_traits<T>::from_rational(state.lambda[j]));
    M[n][n] = UniPoly<T>();
    return M;
}

// One global Newton step.  Preconditions are the items of the defining
// assumption; each failure is reported with its item index.  Returns the
// new state with modulus Q and parametrizations V, and asserts the exact
// identity sum lambda_i V_i(T) = T.
template <class T>
GlobalNewtonState<T> global_step(const GlobalNewtonState<T>& state, const PolySystem& F,
                                 GlobalStepTrace* trace = nullptr) {
    static_assert(field_traits<T>::exact, "global_step requires exact arithmetic");
    const std::size_t n = F.size();
    if (n != state.v.size() || n != state.lambda.size())
        throw PolyError("global_step: dimension mismatch");
    const long d = state.ctx.degree();

    // Assumption checks: (1) monic modulus is enforced by the ctx;
    // (2) reduced parametrizations; (3) q' invertible; (4) compatibility.
    for (const auto& vi : state.v)
        if (vi.degree() > d - 1) throw AssumptionViolation(2, "deg v_i exceeds d-1");
    if (!squarefree_check(state.ctx.modulus))
        throw AssumptionViolation(3, "q' shares a factor with q");
    if (state.lambda_combination() != UniPoly<T>::identity())
        throw AssumptionViolation(4, "sum lambda_i v_i != T");

    auto J = jacobian(F.polynomials);
    std::vector<std::vector<UniPoly<T>>> Jv(n, std::vector<UniPoly<T>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) Jv[i][j] = compose_mod(J[i][j], state.v, state.ctx);

    auto [m, r] = division_data(state, F);

    // w = v - (J_F(v)^-1 F(v) mod q)
    std::vector<UniPoly<T>> w;
    try {
        std::vector<UniPoly<T>> corr = solve_mod(Jv, r, state.ctx);
        for (std::size_t i = 0; i < n; ++i) w.push_back(state.ctx.reduce(state.v[i] - corr[i]));
    } catch (const SingularModQ&) {
        throw AssumptionViolation(5, "J_F(v(T)) not invertible mod q");
    }

    // Delta = sum lambda_i w_i - T
    UniPoly<T> Delta;
    for (std::size_t i = 0; i < n; ++i)
        Delta = Delta + field_traits<T>::from_rational(state.lambda[i]) * w[i];
    Delta = Delta - UniPoly<T>::identity();

    // U = v' - (J_F(v)^-1 r' mod q)
    std::vector<UniPoly<T>> rprime;
    for (const auto& ri : r) rprime.push_back(ri.derivative());
    std::vector<UniPoly<T>> U;
    try {
        std::vector<UniPoly<T>> corr = solve_mod(Jv, rprime, state.ctx);
        for (std::size_t i = 0; i < n; ++i)
            U.push_back(state.ctx.reduce(state.v[i].derivative() - corr[i]));
    } catch (const SingularModQ&) {
        throw AssumptionViolation(5, "J_F(v(T)) not invertible mod q");
    }

    // Lambda = sum lambda_i U_i, invertible mod q when the assumptions hold.
    UniPoly<T> Lambda;
    for (std::size_t i = 0; i < n; ++i)
        Lambda = Lambda + field_traits<T>::from_rational(state.lambda[i]) * U[i];
    Lambda = state.ctx.reduce(Lambda);
    UniPoly<T> ratio;  // Delta / Lambda mod q, reused for V and Q
    try {
        ratio = state.ctx.mul(state.ctx.reduce(Delta), modinv(Lambda, state.ctx));
    } catch (const NotInvertible& e) {
        throw LambdaNotInvertible(
            "Lambda(T) shares a factor with q(T) (precondition failure): gcd = " + e.gcd);
    }

    std::vector<UniPoly<T>> V;
    for (std::size_t i = 0; i < n; ++i)
        V.push_back(state.ctx.reduce(w[i] - state.ctx.mul(ratio, U[i])));
    UniPoly<T> Q =
        state.ctx.modulus - state.ctx.reduce(state.ctx.mul(ratio, state.ctx.modulus.derivative()));

    if (!Q.is_monic() || Q.degree() != d)
        throw AssumptionViolation(1, "updated modulus not monic of degree d");
    if (!squarefree_check(Q)) throw AssumptionViolation(1, "updated modulus not square-free");

    GlobalNewtonState<T> next(QuotientCtxT<T>(Q), std::move(V), state.lambda);
    if (next.lambda_combination() != UniPoly<T>::identity())
        throw PolyError("global_step: postcondition sum lambda_i V_i = T failed");

    if (trace) {
        trace->lambda_degree = Lambda.degree();
        trace->assumptions_ok = true;
        double worst = 0.0;
        auto scan = [&worst](const UniPoly<T>& a, const UniPoly<T>& b) {
            long deg = std::max(a.degree(), b.degree());
            for (long i = 0; i <= deg; ++i) {
                T diff = a.coeff(static_cast<std::size_t>(i)) - b.coeff(static_cast<std::size_t>(i));
                if constexpr (std::is_same_v<T, Rational>) {
                    double x = std::abs(diff.get_d());
                    if (x > worst) worst = x;
                } else {
                    double x = std::sqrt(diff.norm2().get_d());
                    if (x > worst) worst = x;
                }
            }
        };
        scan(next.ctx.modulus, state.ctx.modulus);
        for (std::size_t i = 0; i < n; ++i) scan(next.v[i], state.v[i]);
        trace->max_coeff_delta = worst;
    }
    return next;
}

// Global error bound E = nu * (1/2)^(2^k - 1).
inline Rational global_error_bound(const Rational& nu, unsigned k) {
    if (nu <= 0) throw ArithError("global_error_bound: nu must be positive");
    if (k > 40) k = 40;
    Rational E = nu;
    mpq_div_2exp(E.get_mpq_t(), E.get_mpq_t(), static_cast<unsigned long>((1UL << k) - 1));
    E.canonicalize();
    return E;
}

}  // namespace rurcert
