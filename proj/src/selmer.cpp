#include "qc/selmer.hpp"

#include <algorithm>
#include <sstream>

#include "qc/errors.hpp"

namespace qc {

WSet w_set(std::uint64_t l, long Nl, std::uint64_t p, long N) {
    if (l == p) throw DomainError("w_set: l = p");
    WSet W;
    W.l = l;
    W.N = Nl;
    W.values.push_back(0);
    for (long n = 1; 2 * n <= Nl; ++n) {
        mpq_class q(n * (Nl - n), 2 * Nl);
        q.canonicalize();
        W.values.push_back(q);
    }
    Padic logl = padic_log(Padic::from_int(p, static_cast<long>(l), N + 2));
    for (const auto& q : W.values) W.evaluated.push_back((logl * Padic::from_rational(p, q, N + 2)).reduce(N));
    return W;
}

std::vector<WSet> w_sets(const CurveModel& E, const std::vector<std::uint64_t>& S, std::uint64_t p, long N,
                         const WOverrides& overrides) {
    std::vector<WSet> out;
    for (std::uint64_t l : S) {
        if (l == p) throw DomainError("w_sets: p lies in S");
        ReductionData r = classify_reduction(E, l);
        WSet W;
        auto it = overrides.find(l);
        if (it != overrides.end()) {
            W = w_set(l, 1, p, N);
            W.values = it->second;
            std::sort(W.values.begin(), W.values.end());
            W.values.erase(std::unique(W.values.begin(), W.values.end()), W.values.end());
            Padic logl = padic_log(Padic::from_int(p, static_cast<long>(l), N + 2));
            W.evaluated.clear();
            for (const auto& q : W.values) W.evaluated.push_back((logl * Padic::from_rational(p, q, N + 2)).reduce(N));
            W.overridden = true;
        } else if (r.type == ReductionType::multiplicative) {
            W = w_set(l, r.N, p, N);
        } else {
            W = w_set(l, 1, p, N);
        }
        W.N = r.N;
        W.type = r.type;
        out.push_back(std::move(W));
    }
    return out;
}

std::string WNorm::key() const {
    std::ostringstream s;
    bool first = true;
    for (const auto& [l, q] : coeffs) {
        if (q == 0) continue;
        if (!first) s << " + ";
        s << q.get_str() << "*log(" << l << ")";
        first = false;
    }
    if (first) s << "0";
    return s.str();
}

std::vector<WNorm> w_norms(const std::vector<WSet>& sets) {
    // zero coefficients are dropped so that primes with W_l = {0} do not split keys
    std::map<std::map<std::uint64_t, mpq_class>, Padic> acc;
    std::map<std::uint64_t, mpq_class> cur;
    auto rec = [&](auto&& self, std::size_t i, const Padic& val) -> void {
        if (i == sets.size()) {
            acc.emplace(cur, val);
            return;
        }
        const WSet& W = sets[i];
        for (std::size_t k = 0; k < W.values.size(); ++k) {
            mpq_class prev = cur.count(W.l) ? cur[W.l] : mpq_class(0);
            mpq_class next = prev + W.values[k];
            if (next == 0) cur.erase(W.l);
            else cur[W.l] = next;
            self(self, i + 1, val + W.evaluated[k]);
            if (prev == 0) cur.erase(W.l);
            else cur[W.l] = prev;
        }
    };
    std::uint64_t p = 0;
    long N = 0;
    for (const auto& W : sets)
        if (!W.evaluated.empty()) p = W.evaluated[0].prime(), N = W.evaluated[0].precision();
    if (p == 0) {
        WNorm z;
        return {z};
    }
    rec(rec, 0, Padic::zero(p, N));
    std::vector<WNorm> out;
    for (auto& [c, v] : acc) out.push_back({c, v});
    return out;
}

namespace {

int match_known(const Point<Padic>& P, const std::vector<Point<mpq_class>>& known, long digits) {
    for (std::size_t i = 0; i < known.size(); ++i) {
        const auto& K = known[i];
        auto integral = [&](const mpq_class& q) { return mpz_divisible_ui_p(q.get_den_mpz_t(), P.x.prime()) == 0; };
        if (K.inf || !integral(K.x) || !integral(K.y)) continue;
        Padic x = Padic::from_rational(P.x.prime(), K.x, P.x.precision());
        Padic y = Padic::from_rational(P.x.prime(), K.y, P.y.precision());
        if (agreement(x, P.x) >= digits && agreement(y, P.y) >= digits) return static_cast<int>(i);
    }
    return -1;
}

WeaklyGlobalPoint make_point(const Point<Padic>& P, const Point<Fp>& bar) {
    WeaklyGlobalPoint w;
    w.P = P;
    w.residue_x = bar.x.v;
    w.residue_y = bar.y.v;
    return w;
}

enum class Verdict { accept, reject, unresolved };

Verdict classify(const Padic& d2, const Padic& w, const SelmerOptions& opt) {
    long a = agreement(d2, w);
    if (a >= opt.match_digits) return Verdict::accept;
    if (a < opt.reject_below) return Verdict::reject;
    // in the gap: a visible nonzero digit settles it, otherwise precision ran out
    long known = std::min(d2.precision(), w.precision());
    return a < known ? Verdict::reject : Verdict::unresolved;
}

std::vector<WNorm> norms_for(const CurveModel& E, const std::vector<std::uint64_t>& S, std::uint64_t p,
                             const SelmerOptions& opt) {
    return w_norms(w_sets(E, S, p, opt.N, opt.overrides));
}

}  // namespace

Level1Report level1_set(const Coleman& C, const std::vector<Point<mpq_class>>& known) {
    const CurveModel& E = C.curve();
    const std::uint64_t p = C.prime();
    const long W = C.working_precision();
    Level1Report R;
    R.p = p;
    R.precision = C.precision();
    R.reduction_order = count_points_Fp(E, p).first;
    for (const auto& bar : affine_points_Fp(E, p)) {
        Point<Padic> centre = lift_residue_point(E, bar, W + 10);
        LocalDisk D = C.disk(centre);
        ColemanValues vc;
        vc.I_alpha = elliptic_log(E, p, centre, W);
        DiskSeries L = C.log_series(D, vc);
        for (const auto& t : series_zeros_in_disk(L, 1)) {
            WeaklyGlobalPoint w = make_point(D.point(t), bar);
            w.log = L.evaluate(t);
            w.known = match_known(w.P, known, kDefaultMatchDigits);
            R.points.push_back(std::move(w));
        }
    }
    return R;
}

Level2Report level2_set_rank0(const CurveModel& E, const std::vector<std::uint64_t>& S, std::uint64_t p,
                              const std::vector<Point<mpq_class>>& known, const SelmerOptions& opt) {
    for (int attempt = 0;; ++attempt) {
        SelmerOptions o = opt;
        o.N = opt.N << attempt;
        std::vector<WNorm> norms = norms_for(E, S, p, o);
        Coleman C(E, p, o.N, o.engine);
        Level1Report L1 = level1_set(C, known);

        Level2Report R;
        R.p = p;
        R.precision = o.N;
        R.reruns = attempt;
        R.norm_count = norms.size();
        R.assumptions = opt.assumptions;
        for (const auto& w : norms) R.psi.push_back({w, {}});
        bool rerun = false;
        for (auto& z : L1.points) {
            z.D2 = C.at(z.P).D2;
            std::vector<std::size_t> hits;
            for (std::size_t j = 0; j < norms.size(); ++j) {
                Verdict v = classify(z.D2, norms[j].value, o);
                if (v == Verdict::accept) hits.push_back(j);
                if (v == Verdict::unresolved) rerun = true;
            }
            if (hits.size() > 1) rerun = true;
            z.known = match_known(z.P, known, o.match_digits);
            if (hits.size() == 1) {
                R.psi[hits[0]].points.push_back(z);
                R.points.push_back(z);
            } else if (hits.empty()) {
                R.unmatched.push_back(z);
            }
        }
        if (!rerun) return R;
        if (attempt >= opt.max_reruns)
            throw PrecisionError("level2_set_rank0: ambiguous or unresolved norm match at precision " +
                                 std::to_string(o.N));
    }
}

Level2Report level2_set_rank1(const CurveModel& E, const std::vector<std::uint64_t>& S, std::uint64_t p,
                              const Point<mpq_class>& y, const std::optional<Padic>& c_override,
                              const std::vector<Point<mpq_class>>& known, const SelmerOptions& opt) {
    Coleman C(E, p, opt.N, opt.engine);
    const long W = C.working_precision();
    std::vector<WNorm> norms = norms_for(E, S, p, opt);

    Level2Report R;
    R.p = p;
    R.precision = opt.N;
    R.norm_count = norms.size();
    R.assumptions = opt.assumptions;
    for (const auto& w : norms) R.psi.push_back({w, {}});

    Padic c;
    if (c_override) {
        c = *c_override;
    } else {
        ColemanValues vy = C.at(to_padic_point(y, p, W + 10));
        if (vy.I_alpha.is_zero() || vy.I_alpha.valuation() >= opt.N)
            throw DomainError("level2_set_rank1: log(y) = 0, the generator is torsion");
        c = vy.D2 / (vy.I_alpha * vy.I_alpha);
    }
    R.c = c;

    for (const auto& bar : affine_points_Fp(E, p)) {
        Point<Padic> centre = lift_residue_point(E, bar, W + 10);
        LocalDisk D = C.disk(centre);
        ColemanValues vc = C.at(centre);
        DiskSeries L = C.log_series(D, vc);
        DiskSeries G = C.d2_series(D, vc) - L * L * c;
        std::vector<WeaklyGlobalPoint> here;
        for (std::size_t j = 0; j < norms.size(); ++j) {
            DiskSeries Gj = G;
            Gj.set_coeff(0, G.coeff(0) - norms[j].value);
            for (const auto& t : series_zeros_in_disk(Gj, 1)) {
                WeaklyGlobalPoint w = make_point(D.point(t), bar);
                w.log = L.evaluate(t);
                w.D2 = C.d2_series(D, vc).evaluate(t);
                w.known = match_known(w.P, known, opt.match_digits);
                R.psi[j].points.push_back(w);
                bool dup = false;
                for (const auto& h : here)
                    if (agreement(h.P.x, w.P.x) >= opt.match_digits && agreement(h.P.y, w.P.y) >= opt.match_digits)
                        dup = true;
                if (!dup) here.push_back(w);
            }
        }
        for (auto& w : here) R.points.push_back(std::move(w));
    }
    return R;
}

}  // namespace qc
