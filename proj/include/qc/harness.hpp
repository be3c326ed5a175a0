#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "qc/coleman.hpp"
#include "qc/ec.hpp"
#include "qc/selmer.hpp"

namespace qc {

/*
 * One JSON object per line:
 *   {"label": "378b3", "a": [1,-1,0,-1062,13590], "rank": 0, "sha_finite": true,
 *    "integral_points": [[19,-9],[19,-10]], "generator": [0,0],
 *    "w_override": {"2": ["0","1"]}}
 * generator and w_override are optional; integers may be JSON numbers or strings.
 */
struct CurveRecord {
    std::string label;
    std::array<mpz_class, 5> a;
    int rank = 0;
    bool sha_finite = false;
    std::vector<Point<mpq_class>> integral_points;
    std::optional<Point<mpq_class>> generator;
    WOverrides w_override;
    long line = 0;

    CurveModel curve() const { return CurveModel::make(a, label); }
};

struct RecordError {
    long line = 0;
    std::string message;
};

struct IngestResult {
    std::vector<CurveRecord> records;
    std::vector<RecordError> errors;
};

// Throws IngestError when the file cannot be read.
IngestResult ingest(const std::string& path);
IngestResult ingest_stream(std::istream& in);
const CurveRecord* find_record(const IngestResult& r, const std::string& label);

enum class Verdict { pass, fail, skip, error };
const char* to_string(Verdict v);

struct RunOptions {
    int level = 2;
    long N = 20;
    int match_digits = 5;
    bool timings = false;  // timings break byte-identical reruns, so they are opt-in
    unsigned jobs = 0;     // 0: QC_JOBS or the hardware count
};

struct RunReport {
    std::string label;
    std::uint64_t p = 0;
    int level = 2;
    long precision = 0;
    Verdict verdict = Verdict::error;
    std::string message;
    std::size_t norm_count = 0;
    std::size_t level1_count = 0;
    std::vector<PsiSet> psi;  // nonempty only
    std::vector<WeaklyGlobalPoint> points;
    std::vector<int> missing;  // known points not found
    std::optional<Padic> c;
    std::vector<std::string> assumptions;
    std::map<std::string, double> timings;
};

RunReport run_record(const CurveRecord& rec, std::uint64_t p, const RunOptions& opt);
nlohmann::ordered_json to_json(const RunReport& r, bool timings);
nlohmann::ordered_json to_json(const Point<Padic>& P);

struct BatchSummary {
    std::size_t pass = 0, fail = 0, skip = 0, error = 0;
    std::vector<RunReport> reports;  // by label
};

// Writes one report per line to out (skipped if empty); throws IngestError on I/O failure.
BatchSummary run_batch(const std::vector<CurveRecord>& records, std::uint64_t p, const RunOptions& opt,
                       const std::string& out);

}  // namespace qc
