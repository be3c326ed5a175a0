#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qc/errors.hpp"
#include "qc/harness.hpp"

using namespace qc;

namespace {

const std::string kCurves = std::string(QC_DATA_DIR) + "/curves.jsonl";

IngestResult from_text(const std::string& s) {
    std::istringstream in(s);
    return ingest_stream(in);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check_padic_strings(const nlohmann::json& j, int& n) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s.find("+ O(") != std::string::npos) {
            CHECK(Padic::parse(s).str() == s);
            ++n;
        }
    } else if (j.is_structured()) {
        for (const auto& v : j) check_padic_strings(v, n);
    }
}

}  // namespace

TEST_CASE("ingest") {
    auto R = from_text(
        R"({"label":"378b3","a":[1,-1,0,-1062,13590],"rank":0,"sha_finite":true,"integral_points":[[19,-9],[19,-10]]})");
    REQUIRE(R.records.size() == 1);
    CHECK(R.errors.empty());
    CHECK(R.records[0].integral_points.size() == 2);
    CHECK(R.records[0].sha_finite);

    auto bad = from_text(
        "{\"label\":\"ok\",\"a\":[0,0,1,-1,0],\"rank\":1,\"integral_points\":[[0,0]],\"generator\":[0,0]}\n"
        "{\"label\":\"off\",\"a\":[1,-1,0,-1062,13590],\"rank\":0,\"integral_points\":[[19,-8]]}\n"
        "not json\n"
        "\n"
        "{\"label\":\"sing\",\"a\":[0,0,0,0,0]}\n"
        "{\"label\":\"ov\",\"a\":[0,0,0,-891,4374],\"w_override\":{\"4\":[\"0\"]}}\n"
        "{\"label\":\"q\",\"a\":[\"0\",\"0\",\"0\",\"-891\",\"4374\"],\"w_override\":{\"2\":[\"0\",\"1/2\"]}}\n");
    REQUIRE(bad.records.size() == 2);
    CHECK(bad.records[0].generator.has_value());
    CHECK(bad.records[1].w_override.at(2) == std::vector<mpq_class>{0, mpq_class(1, 2)});
    REQUIRE(bad.errors.size() == 4);
    CHECK(bad.errors[0].line == 2);
    CHECK(bad.errors[0].message.find("not on the curve") != std::string::npos);
    CHECK(bad.errors[1].line == 3);
    CHECK(bad.errors[2].line == 5);
    CHECK(bad.errors[3].line == 6);

    CHECK(from_text("").records.empty());
    CHECK_THROWS_AS(ingest("/nonexistent/curves.jsonl"), IngestError);
}

TEST_CASE("batch over the fixtures") {
    auto in = ingest(kCurves);
    REQUIRE(in.errors.empty());
    REQUIRE(in.records.size() == 3);
    RunOptions o;
    o.jobs = 2;
    const std::string out1 = "harness_test_1.jsonl", out2 = "harness_test_2.jsonl";
    auto s = run_batch(in.records, 5, o, out1);
    CHECK(s.pass == 3);
    CHECK(s.fail + s.skip + s.error == 0);
    std::vector<std::string> labels;
    for (const auto& r : s.reports) labels.push_back(r.label);
    CHECK(labels == std::vector<std::string>{"1122m2", "378b3", "sec6"});

    // byte-identical on rerun, whatever the job count
    o.jobs = 1;
    run_batch(in.records, 5, o, out2);
    std::string a = slurp(out1), b = slurp(out2);
    CHECK(a == b);
    std::istringstream lines(a);
    std::string line;
    int n = 0, count = 0;
    while (std::getline(lines, line)) {
        ++n;
        check_padic_strings(nlohmann::json::parse(line), count);
    }
    CHECK(n == 3);
    CHECK(count > 20);
    std::remove(out1.c_str());
    std::remove(out2.c_str());

    // doubled precision, same verdicts
    o.N = 40;
    auto hi = run_batch(in.records, 5, o, "");
    for (std::size_t i = 0; i < hi.reports.size(); ++i) CHECK(hi.reports[i].verdict == s.reports[i].verdict);

    // 1122m2 report contents
    const RunReport& r = s.reports[0];
    CHECK(r.norm_count == 384);
    CHECK(r.points.size() == 4);
    CHECK(r.level1_count == 5);
}

TEST_CASE("skips, overrides, rank one") {
    auto in = ingest(kCurves);
    const CurveRecord* rec = find_record(in, "378b3");
    REQUIRE(rec);
    RunOptions o;
    CHECK(run_record(*rec, 7, o).verdict == Verdict::skip);

    CurveRecord more = *rec;
    more.w_override[13] = {0};
    more.w_override[11] = {0};
    CHECK(run_record(more, 5, o).verdict == run_record(*rec, 5, o).verdict);

    const CurveRecord* sec6 = find_record(in, "sec6");
    REQUIRE(sec6);
    auto rs = run_record(*sec6, 5, o);
    CHECK(rs.verdict == Verdict::pass);
    bool echoed = false;
    for (const auto& a : rs.assumptions) echoed |= a.find("W_2 overridden") != std::string::npos;
    CHECK(echoed);

    auto r1 = ingest(std::string(QC_DATA_DIR) + "/rank1.jsonl");
    REQUIRE(r1.records.size() == 1);
    auto rr = run_record(r1.records[0], 5, o);
    // containment only: every integral point is found, plus extra p-adic points
    CHECK(rr.missing.empty());
    CHECK(rr.verdict == Verdict::fail);
    CHECK(rr.c.has_value());

    CurveRecord no_gen = r1.records[0];
    no_gen.generator.reset();
    CHECK(run_record(no_gen, 5, o).verdict == Verdict::error);
}
