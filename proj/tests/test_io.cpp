#include "distprob/errors.hpp"
#include "distprob/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <unistd.h>
#include <vector>

using namespace distprob;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        root_ = fs::temp_directory_path() /
                ("distprob_io_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter_++));
        fs::create_directories(root_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(root_, ec);
    }
    std::string path(const std::string& name) const { return (root_ / name).string(); }

private:
    static inline int counter_ = 0;
    fs::path root_;
};

std::string write_file(const TempDir& dir, const std::string& name,
                       const std::string& content) {
    const std::string path = dir.path(name);
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("read_dataset with header and label column") {
    TempDir dir;
    const auto path =
        write_file(dir, "small.csv", "x,label\n1.5,0\n2.5,1\n3.5,no\n");
    io::TabularFileSpec spec;
    spec.path = path;
    spec.label_column = "label";

    const auto data = io::read_dataset(spec);
    CHECK(data.size() == 3);
    CHECK(data.dimension() == 1);
    CHECK(data.at(0, 0) == 1.5);
    CHECK(data.labels() == std::vector<int>{0, 1, 0});
}

TEST_CASE("read_dataset label spellings and column-by-index") {
    TempDir dir;
    const auto path = write_file(
        dir, "labels.csv", "a,b,cls\n1,2,anomaly\n3,4,NORMAL\n5,6,Yes\n7,8,outlier\n");
    io::TabularFileSpec spec;
    spec.path = path;
    spec.label_column = "2";

    const auto data = io::read_dataset(spec);
    CHECK(data.dimension() == 2);
    CHECK(data.labels() == std::vector<int>{1, 0, 1, 1});

    io::TabularFileSpec headerless;
    headerless.path = write_file(dir, "plain.csv", "1,2\n3,4\n");
    headerless.header = false;
    const auto bare = io::read_dataset(headerless);
    CHECK(bare.size() == 2);
    CHECK(bare.dimension() == 2);
    CHECK_FALSE(bare.has_labels());
}

TEST_CASE("read_dataset reports cell positions on errors") {
    TempDir dir;
    io::TabularFileSpec spec;

    spec.path = write_file(dir, "nan.csv", "a,b,c\n1,2,NaN\n");
    try {
        io::read_dataset(spec);
        FAIL("expected an InputError");
    } catch (const InputError& e) {
        const std::string what = e.what();
        CHECK(what.find("row 2") != std::string::npos);
        CHECK(what.find("column 3") != std::string::npos);
    }

    spec.path = write_file(dir, "ragged.csv", "a,b\n1,2\n3\n");
    CHECK_THROWS_AS(io::read_dataset(spec), InputError);

    spec.path = write_file(dir, "empty.csv", "");
    CHECK_THROWS_AS(io::read_dataset(spec), InputError);

    spec.path = write_file(dir, "header_only.csv", "a,b\n");
    CHECK_THROWS_AS(io::read_dataset(spec), InputError);

    spec.path = dir.path("missing.csv");
    CHECK_THROWS_AS(io::read_dataset(spec), InputError);

    spec.path = write_file(dir, "badlabel.csv", "a,l\n1,maybe\n");
    spec.label_column = "l";
    CHECK_THROWS_AS(io::read_dataset(spec), InputError);

    spec.path = write_file(dir, "nolabel.csv", "a,b\n1,2\n");
    spec.label_column = "missing";
    CHECK_THROWS_AS(io::read_dataset(spec), InputError);
}

TEST_CASE("read_dataset at benchmark shape") {
    // shaped like the largest tabular benchmark: 6942 points, 21 features,
    // 347 positive labels
    TempDir dir;
    std::string content = "f0";
    for (int j = 1; j < 21; ++j) {
        content += ",f" + std::to_string(j);
    }
    content += ",label\n";
    for (int i = 0; i < 6942; ++i) {
        for (int j = 0; j < 21; ++j) {
            content += std::to_string((i * 31 + j * 7) % 97) + ".5,";
        }
        content += (i < 347 ? "outlier" : "normal");
        content += '\n';
    }
    io::TabularFileSpec spec;
    spec.path = write_file(dir, "bench.csv", content);
    spec.label_column = "label";

    const auto data = io::read_dataset(spec);
    CHECK(data.size() == 6942);
    CHECK(data.dimension() == 21);
    std::size_t positives = 0;
    for (int label : data.labels()) {
        positives += static_cast<std::size_t>(label);
    }
    CHECK(positives == 347);
}

TEST_CASE("score files round-trip bit-exactly") {
    TempDir dir;
    const std::vector<std::string> ids{"0", "1", "2", "3"};
    detectors::ScoreVector raw;
    raw.detector_id = "kthnn";
    raw.scores = {0.1, 1.0 / 3.0, 1e-300, 12345.6789e10};
    detectors::ScoreVector probs;
    probs.scores = {0.5, std::nextafter(0.5, 1.0), 0.0, 1.0};

    const auto path = dir.path("scores.csv");
    io::write_scores(path, ids, raw, &probs);

    const auto lines = slurp(path);
    CHECK(lines.rfind("id,raw_score,probability\n", 0) == 0);
    CHECK(std::count(lines.begin(), lines.end(), '\n') == 5);

    const auto back = io::read_scores(path);
    CHECK(back.ids == ids);
    CHECK(back.raw == raw.scores);
    REQUIRE(back.probabilities.has_value());
    CHECK(*back.probabilities == probs.scores);

    // two rows in, three lines out, no probability column
    const std::vector<std::string> two{"0", "1"};
    detectors::ScoreVector short_raw;
    short_raw.scores = {1.0, 2.0};
    io::write_scores(dir.path("raw.csv"), two, short_raw);
    const auto raw_text = slurp(dir.path("raw.csv"));
    CHECK(raw_text == "id,raw_score\n0,1\n1,2\n");
    const auto raw_back = io::read_scores(dir.path("raw.csv"));
    CHECK_FALSE(raw_back.probabilities.has_value());

    CHECK_THROWS_AS(io::write_scores("/nonexistent_dir/out.csv", two, short_raw),
                    InputError);
    CHECK_THROWS_AS(io::write_scores(path, two, raw), InputError); // length mismatch
}

TEST_CASE("evaluation reports round-trip") {
    TempDir dir;
    evaluation::EvaluationReport report;
    evaluation::ReportEntry entry;
    entry.detector = "knnw";
    entry.k = 7;
    entry.scheme = "mean";
    entry.distribution = "empirical";
    entry.fold = 1;
    entry.auc_raw = 0.875;
    entry.auc_transformed = 0.875;
    entry.rank_stable = true;
    entry.f1_threshold = -std::numeric_limits<double>::infinity();
    entry.f1 = 1.0 / 3.0;
    report.entries.push_back(entry);
    entry.fold = 0;
    entry.rank_stable = false;
    entry.f1_threshold = 0.25;
    report.entries.push_back(entry);

    const auto path = dir.path("report.csv");
    io::write_report(path, report);
    const auto back = io::read_report(path);
    CHECK(back.entries == report.entries);

    CHECK_THROWS_AS(io::read_report(dir.path("missing.csv")), InputError);
    const auto bogus = dir.path("bogus.csv");
    std::ofstream(bogus) << "not,a,report\n";
    CHECK_THROWS_AS(io::read_report(bogus), InputError);
}

TEST_CASE("format_double survives a round trip") {
    for (double v :
         {0.1, 2.0 / 3.0, 1e-308, 1.7976931348623157e308, 0.0, 123456.789,
          std::nextafter(1.0, 2.0)}) {
        const std::string text = io::format_double(v);
        double parsed = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
        CHECK(ec == std::errc{});
        CHECK(ptr == text.data() + text.size());
        CHECK(parsed == v);
    }
}
