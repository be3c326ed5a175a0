#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qc/errors.hpp"
#include "qc/frobenius.hpp"
#include "qc/harness.hpp"
#include "qc/polylog.hpp"

using namespace qc;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2, computation = 3 };

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::fail: return failed;
        case Verdict::error: return computation;
        default: return ok;
    }
}

void print_points(const std::vector<Padic>& pts) {
    std::cout << pts.size() << (pts.size() == 1 ? " point" : " points") << "\n";
    for (const auto& z : pts) std::cout << "  z = " << z.str() << "\n";
}

const CurveRecord& load_one(const std::string& path, const std::string& label) {
    static IngestResult R;
    R = ingest(path);
    for (const auto& e : R.errors) std::cerr << path << ":" << e.line << ": " << e.message << "\n";
    const CurveRecord* r = find_record(R, label);
    if (!r) throw IngestError(0, "no record labelled " + label + " in " + path);
    return *r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weakly global points on P^1 - {0,1,oo} and on punctured elliptic curves"};
    app.require_subcommand(1);
    app.fallthrough();
    long prec = kDefaultPrecision;
    int match = static_cast<int>(kDefaultMatchDigits);
    app.add_option("--prec", prec, "p-adic precision")->default_val(prec)->check(CLI::Range(4L, 400L));
    app.add_option("--match-digits", match, "digits required for a match")->default_val(match)->check(CLI::Range(1, 200));

    std::uint64_t p = 0;
    int level = 1;

    auto* p1 = app.add_subcommand("p1", "X(Z_p)_1 or X(Z_p)_2 for P^1 - {0,1,oo}");
    p1->add_option("--p", p, "odd prime")->required();
    p1->add_option("--level", level, "1 or 2")->check(CLI::IsMember({1, 2}))->default_val(1);

    auto* s2 = app.add_subcommand("p1-s2", "zeros of 2 Li_2(z) + log z log(1-z)");
    s2->add_option("--p", p, "odd prime")->required();

    std::uint64_t bound = 0;
    std::string resume;
    unsigned jobs = 0;
    auto* scan = app.add_subcommand("dilog-scan", "g_2(zeta_6) mod p for p = 1 mod 3 below a bound");
    scan->add_option("--bound", bound, "upper bound for p")->required();
    scan->add_option("--resume", resume, "checkpoint file, created or resumed");
    scan->add_option("--jobs", jobs, "worker threads (default: QC_JOBS or all cores)");

    std::string curves, label, out;
    bool timings = false;
    auto* ec = app.add_subcommand("ec", "weakly global points of one curve");
    ec->add_option("--curves", curves, "JSONL curve file")->required();
    ec->add_option("--label", label, "record label")->required();
    ec->add_option("--p", p, "good prime")->required();
    ec->add_option("--level", level, "1 or 2")->check(CLI::IsMember({1, 2}))->default_val(2);
    ec->add_flag("--timings", timings, "include timings");

    auto* batch = app.add_subcommand("batch", "verify every record of a curve file");
    batch->add_option("--curves", curves, "JSONL curve file")->required();
    batch->add_option("--p", p, "prime")->required();
    batch->add_option("--level", level, "1 or 2")->check(CLI::IsMember({1, 2}))->default_val(2);
    batch->add_option("--out", out, "JSONL report file");
    batch->add_option("--jobs", jobs, "worker threads");
    batch->add_flag("--timings", timings, "include timings");

    auto* frob = app.add_subcommand("frob", "dump the Frobenius matrix");
    frob->add_option("--curves", curves, "JSONL curve file")->required();
    frob->add_option("--label", label, "record label")->required();
    frob->add_option("--p", p, "good prime")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        if (*p1) {
            auto R = p1_weakly_global(p, level, prec);
            std::cout << "X(Z_" << p << ")_" << level << ": ";
            print_points(R.points);
            for (const auto& e : R.evidence)
                std::cout << "  log z = " << e.log_z.str() << ", log(1-z) = " << e.log_1mz.str()
                          << ", Li_2(z) = " << e.li2.str() << "\n";
            return ok;
        }
        if (*s2) {
            auto R = p1_s2_weakly_global(p, prec);
            std::cout << "zeros of 2 Li_2(z) + log z log(1-z) on Z_" << p << ": ";
            print_points(R.points);
            std::size_t s_integral = 0;
            for (auto q : {mpq_class(2), mpq_class(1, 2), mpq_class(-1)}) {
                Padic z = Padic::from_rational(p, q, prec);
                bool found = false;
                for (const auto& x : R.points) found |= agreement(x, z) >= match;
                if (found) ++s_integral;
                std::cout << "  " << q.get_str() << (found ? " found" : " not found") << "\n";
            }
            if (R.points.size() > s_integral)
                std::cout << "NOTE: the set strictly contains the S-integral points {2, 1/2, -1}\n";
            return ok;
        }
        if (*scan) {
            ScanResult R = dilog_scan(bound, {jobs, resume});
            std::cout << R.verdicts.size() << " primes p = 1 mod 3 below " << bound;
            if (R.resumed) std::cout << " (" << R.resumed << " from checkpoint)";
            std::cout << ", " << R.vanishing.size() << " vanishing primes\n";
            for (auto v : R.vanishing) std::cout << "  g_2(zeta_6) = 0 mod " << v << "\n";
            return R.vanishing.empty() ? ok : failed;
        }
        if (*ec) {
            const CurveRecord& rec = load_one(curves, label);
            RunOptions o;
            o.level = level;
            o.N = prec;
            o.match_digits = match;
            o.timings = timings;
            RunReport r = run_record(rec, p, o);
            std::cout << to_json(r, timings).dump(2) << "\n";
            std::cout << r.label << " p=" << p << " level " << level << ": " << to_string(r.verdict);
            if (!r.message.empty()) std::cout << " (" << r.message << ")";
            std::cout << "\n";
            return verdict_exit(r.verdict);
        }
        if (*batch) {
            IngestResult in = ingest(curves);
            for (const auto& e : in.errors) std::cerr << curves << ":" << e.line << ": " << e.message << "\n";
            RunOptions o;
            o.level = level;
            o.N = prec;
            o.match_digits = match;
            o.timings = timings;
            o.jobs = jobs;
            BatchSummary s = run_batch(in.records, p, o, out);
            for (const auto& r : s.reports) {
                std::cout << r.label << ": " << to_string(r.verdict);
                if (!r.message.empty()) std::cout << " (" << r.message << ")";
                std::cout << "\n";
            }
            std::cout << s.pass << " PASS, " << s.fail << " FAIL, " << s.skip << " SKIP, " << s.error << " ERROR";
            if (!in.errors.empty()) std::cout << ", " << in.errors.size() << " rejected records";
            std::cout << "\n";
            if (s.fail) return failed;
            if (s.error) return computation;
            if (!in.errors.empty()) return usage;
            return ok;
        }
        if (*frob) {
            const CurveRecord& rec = load_one(curves, label);
            CurveModel E = rec.curve();
            FrobeniusData F = frobenius_matrix(E, p, prec);
            auto [count, ap] = count_points_Fp(E, p);
            (void)count;
            std::cout << rec.label << " p=" << p << " precision " << F.N << "\n";
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) std::cout << "M[" << i << "][" << j << "] = " << F.M[i][j].str() << "\n";
            std::cout << "trace = " << F.trace().str() << "  (a_p = " << ap << ")\n";
            std::cout << "det   = " << F.det().str() << "\n";
            return ok;
        }
    } catch (const IngestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return computation;
    }
    return usage;
}
