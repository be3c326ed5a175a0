#include "qc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "qc/errors.hpp"
#include "qc/polylog.hpp"

namespace qc {

using json = nlohmann::json;

namespace {

mpz_class to_mpz(const json& v, const std::string& what) {
    if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
    if (v.is_number_unsigned()) return mpz_class(std::to_string(v.get<unsigned long long>()));
    if (v.is_string()) {
        mpz_class z;
        if (z.set_str(v.get<std::string>(), 10) != 0) throw std::invalid_argument(what + ": not an integer");
        return z;
    }
    throw std::invalid_argument(what + ": expected an integer");
}

mpq_class to_mpq(const json& v, const std::string& what) {
    if (v.is_string()) {
        mpq_class q;
        if (q.set_str(v.get<std::string>(), 10) != 0 || q.get_den() == 0)
            throw std::invalid_argument(what + ": not a rational");
        q.canonicalize();
        return q;
    }
    return mpq_class(to_mpz(v, what));
}

Point<mpq_class> to_point(const json& v, const std::string& what) {
    if (!v.is_array() || v.size() != 2) throw std::invalid_argument(what + ": expected [x, y]");
    return {mpq_class(to_mpz(v[0], what)), mpq_class(to_mpz(v[1], what)), false};
}

std::string point_text(const Point<mpq_class>& P) { return "(" + P.x.get_str() + ", " + P.y.get_str() + ")"; }

CurveRecord parse_record(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("expected an object");
    CurveRecord r;
    if (!j.contains("label") || !j["label"].is_string()) throw std::invalid_argument("missing label");
    r.label = j["label"].get<std::string>();
    if (!j.contains("a") || !j["a"].is_array() || j["a"].size() != 5)
        throw std::invalid_argument("a: expected 5 integers");
    for (std::size_t i = 0; i < 5; ++i) r.a[i] = to_mpz(j["a"][i], "a");
    if (j.contains("rank")) {
        if (!j["rank"].is_number_integer()) throw std::invalid_argument("rank: expected an integer");
        r.rank = j["rank"].get<int>();
    }
    if (j.contains("sha_finite")) {
        if (!j["sha_finite"].is_boolean()) throw std::invalid_argument("sha_finite: expected a boolean");
        r.sha_finite = j["sha_finite"].get<bool>();
    }
    CurveModel E = r.curve();
    if (E.disc == 0) throw std::invalid_argument("singular curve");
    if (j.contains("integral_points")) {
        if (!j["integral_points"].is_array()) throw std::invalid_argument("integral_points: expected an array");
        for (const auto& v : j["integral_points"]) {
            auto P = to_point(v, "integral_points");
            if (!on_curve(E, P)) throw std::invalid_argument("point " + point_text(P) + " is not on the curve");
            r.integral_points.push_back(P);
        }
    }
    if (j.contains("generator") && !j["generator"].is_null()) {
        auto P = to_point(j["generator"], "generator");
        if (!on_curve(E, P)) throw std::invalid_argument("generator " + point_text(P) + " is not on the curve");
        r.generator = P;
    }
    if (j.contains("w_override")) {
        if (!j["w_override"].is_object()) throw std::invalid_argument("w_override: expected an object");
        for (const auto& [k, v] : j["w_override"].items()) {
            mpz_class l;
            if (l.set_str(k, 10) != 0 || l < 2 || !l.fits_ulong_p() || mpz_probab_prime_p(l.get_mpz_t(), 30) == 0)
                throw std::invalid_argument("w_override: key " + k + " is not a prime");
            if (!v.is_array()) throw std::invalid_argument("w_override: expected an array of rationals");
            std::vector<mpq_class> vals;
            for (const auto& q : v) vals.push_back(to_mpq(q, "w_override"));
            r.w_override[l.get_ui()] = vals;
        }
    }
    return r;
}

std::vector<std::string> assumptions_for(const CurveRecord& rec, const CurveModel& E, std::uint64_t p) {
    std::vector<std::string> a;
    a.push_back("rank " + std::to_string(rec.rank) + " (input, not verified)");
    a.push_back(rec.sha_finite ? "Sha finite (input, not verified)" : "Sha finiteness not asserted");
    for (std::uint64_t l : bad_primes(E)) {
        if (l == p) continue;
        auto it = rec.w_override.find(l);
        if (it != rec.w_override.end()) {
            std::string s = "W_" + std::to_string(l) + " overridden: {";
            for (std::size_t i = 0; i < it->second.size(); ++i)
                s += (i ? ", " : "") + it->second[i].get_str();
            a.push_back(s + "} * log " + std::to_string(l));
        } else if (classify_reduction(E, l).type == ReductionType::additive) {
            a.push_back("additive at " + std::to_string(l) + ": W_" + std::to_string(l) + " = {0} (default policy)");
        }
    }
    return a;
}

}  // namespace

IngestResult ingest_stream(std::istream& in) {
    IngestResult out;
    std::string line;
    long n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            CurveRecord r = parse_record(json::parse(line));
            r.line = n;
            out.records.push_back(std::move(r));
        } catch (const std::exception& e) {
            out.errors.push_back({n, e.what()});
        }
    }
    return out;
}

IngestResult ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError(0, "cannot open " + path);
    return ingest_stream(in);
}

const CurveRecord* find_record(const IngestResult& r, const std::string& label) {
    for (const auto& c : r.records)
        if (c.label == label) return &c;
    return nullptr;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::skip: return "SKIP";
        default: return "ERROR";
    }
}

RunReport run_record(const CurveRecord& rec, std::uint64_t p, const RunOptions& opt) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    RunReport r;
    r.label = rec.label;
    r.p = p;
    r.level = opt.level;
    r.precision = opt.N;
    CurveModel E = rec.curve();
    if (classify_reduction(E, p).type != ReductionType::good) {
        r.verdict = Verdict::skip;
        r.message = "bad reduction at " + std::to_string(p);
        return r;
    }
    r.assumptions = assumptions_for(rec, E, p);
    try {
        SelmerOptions so;
        so.N = opt.N;
        so.match_digits = opt.match_digits;
        so.overrides = rec.w_override;
        so.assumptions = r.assumptions;
        std::vector<std::uint64_t> S = bad_primes(E);
        if (opt.level == 1) {
            Coleman C(E, p, opt.N);
            Level1Report L = level1_set(C, rec.integral_points);
            r.level1_count = L.points.size();
            r.points = L.points;
        } else if (rec.rank == 0) {
            Level2Report L = level2_set_rank0(E, S, p, rec.integral_points, so);
            r.precision = L.precision;
            r.norm_count = L.norm_count;
            r.level1_count = L.points.size() + L.unmatched.size();
            for (auto& s : L.psi)
                if (!s.points.empty()) r.psi.push_back(s);
            r.points = L.points;
        } else if (rec.rank == 1) {
            if (!rec.generator) throw DomainError("rank one needs a generator");
            Level2Report L = level2_set_rank1(E, S, p, *rec.generator, {}, rec.integral_points, so);
            r.norm_count = L.norm_count;
            for (auto& s : L.psi)
                if (!s.points.empty()) r.psi.push_back(s);
            r.points = L.points;
            r.c = L.c;
        } else {
            throw DomainError("rank >= 2 is not supported");
        }
        std::vector<int> seen(rec.integral_points.size(), 0);
        bool extra = false;
        for (const auto& z : r.points) {
            if (z.known >= 0) seen[static_cast<std::size_t>(z.known)] = 1;
            else extra = true;
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (!seen[i]) r.missing.push_back(static_cast<int>(i));
        r.verdict = (!extra && r.missing.empty()) ? Verdict::pass : Verdict::fail;
        if (extra) r.message = "set contains points that are not known integral points";
        if (!r.missing.empty()) r.message = "known integral points missing from the set";
    } catch (const std::exception& e) {
        r.verdict = Verdict::error;
        r.message = e.what();
    }
    r.timings["total_s"] = std::chrono::duration<double>(clock::now() - t0).count();
    return r;
}

nlohmann::ordered_json to_json(const Point<Padic>& P) {
    nlohmann::ordered_json j;
    j["x"] = P.x.str();
    j["y"] = P.y.str();
    return j;
}

namespace {

nlohmann::ordered_json point_json(const WeaklyGlobalPoint& z) {
    nlohmann::ordered_json j = to_json(z.P);
    j["residue"] = {z.residue_x, z.residue_y};
    if (z.D2.prime() != 0) j["D2"] = z.D2.str();
    j["known"] = z.known;
    return j;
}

}  // namespace

nlohmann::ordered_json to_json(const RunReport& r, bool timings) {
    nlohmann::ordered_json j;
    j["label"] = r.label;
    j["p"] = r.p;
    j["level"] = r.level;
    j["precision"] = r.precision;
    j["verdict"] = to_string(r.verdict);
    if (!r.message.empty()) j["message"] = r.message;
    j["w_norms"] = r.norm_count;
    j["level1_count"] = r.level1_count;
    auto psi = nlohmann::ordered_json::array();
    for (const auto& s : r.psi) {
        nlohmann::ordered_json e;
        e["norm"] = s.norm.key();
        e["value"] = s.norm.value.str();
        auto pts = nlohmann::ordered_json::array();
        for (const auto& z : s.points) pts.push_back(point_json(z));
        e["points"] = pts;
        psi.push_back(e);
    }
    j["psi"] = psi;
    auto pts = nlohmann::ordered_json::array();
    for (const auto& z : r.points) pts.push_back(point_json(z));
    j["points"] = pts;
    j["missing"] = r.missing;
    if (r.c) j["c"] = r.c->str();
    j["assumptions"] = r.assumptions;
    if (timings) j["timings"] = r.timings;
    return j;
}

BatchSummary run_batch(const std::vector<CurveRecord>& records, std::uint64_t p, const RunOptions& opt,
                       const std::string& out) {
    BatchSummary s;
    s.reports.resize(records.size());
    unsigned jobs = opt.jobs ? opt.jobs : default_jobs();
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(records.size(), 1)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < records.size();) s.reports[i] = run_record(records[i], p, opt);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::stable_sort(s.reports.begin(), s.reports.end(),
                     [](const RunReport& a, const RunReport& b) { return a.label < b.label; });
    for (const auto& r : s.reports) {
        switch (r.verdict) {
            case Verdict::pass: ++s.pass; break;
            case Verdict::fail: ++s.fail; break;
            case Verdict::skip: ++s.skip; break;
            case Verdict::error: ++s.error; break;
        }
    }
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw IngestError(0, "cannot write " + out);
        for (const auto& r : s.reports) f << to_json(r, opt.timings).dump() << '\n';
        if (!f) throw IngestError(0, "write failed: " + out);
    }
    return s;
}

}  // namespace qc
