#include "kroncoef/pipeline.hpp"

#include "kroncoef/cache.hpp"
#include "kroncoef/cli.hpp"
#include "kroncoef/errors.hpp"

#include "doctest.h"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace kroncoef;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("kroncoef_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

int run(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST_CASE("bsum1 export of n = 6 has 286 canonical rows with weights summing to 11^3") {
    TempDir dir;
    const fs::path file = dir.path / "n6.csv";
    const auto tensor = kronecker_tensor(6);
    const auto table = b_loadings(6);
    const std::uint64_t rows =
        export_dataset(tensor, table, FeatureMode::bsum1, ExportFormat::csv, file);
    CHECK(rows == 286);

    std::ifstream in(file);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "i,j,k,orbit_weight,b,g,nonzero");
    std::uint64_t weight_sum = 0, row_count = 0;
    std::string line;
    while (std::getline(in, line)) {
        const auto cells = split_csv(line);
        REQUIRE(cells.size() == 7);
        weight_sum += std::stoull(cells[3]);
        // The 6-decimal text is the contract: reparsing and reprinting must
        // reproduce it exactly.
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", std::stod(cells[4]));
        CHECK(cells[4] == buf);
        ++row_count;
    }
    CHECK(row_count == 286);
    CHECK(weight_sum == 1331);
}

TEST_CASE("ends18 features keep the first and last three entries of each padded vector") {
    TempDir dir;
    const fs::path file = dir.path / "n6_ends.csv";
    const auto tensor = kronecker_tensor(6);
    const auto table = b_loadings(6);
    export_dataset(tensor, table, FeatureMode::ends18, ExportFormat::csv, file);

    std::ifstream in(file);
    std::string line;
    std::getline(in, line);  // header
    const auto header = split_csv(line);
    CHECK(header.size() == 4 + 18 + 3);
    // First row is ((6),(6),(6)): padded (6,0,0,0,0,0), ends (6,0,0,0,0,0).
    std::getline(in, line);
    const auto first = split_csv(line);
    const std::vector<std::string> expected{"6", "0", "0", "0", "0", "0"};
    for (int block = 0; block < 3; ++block)
        for (int x = 0; x < 6; ++x)
            CHECK(first[static_cast<std::size_t>(4 + 6 * block + x)] ==
                  expected[static_cast<std::size_t>(x)]);

    // (2,2,1,1) pads to (2,2,1,1,0,0): first three 2,2,1 and last three 1,0,0.
    const int target = index_of(Partition({2, 2, 1, 1}), 6);
    std::ifstream in2(file);
    std::getline(in2, line);
    bool checked = false;
    while (std::getline(in2, line)) {
        const auto cells = split_csv(line);
        if (cells[0] == std::to_string(target) && cells[1] == cells[0] && cells[2] == cells[0]) {
            const std::vector<std::string> block{"2", "2", "1", "1", "0", "0"};
            for (int x = 0; x < 6; ++x) CHECK(cells[static_cast<std::size_t>(4 + x)] == block[static_cast<std::size_t>(x)]);
            checked = true;
            break;
        }
    }
    CHECK(checked);
}

TEST_CASE("jsonl export round-trips b bit-exactly") {
    TempDir dir;
    const fs::path file = dir.path / "n5.jsonl";
    const auto tensor = kronecker_tensor(5);
    const auto table = b_loadings(5);
    const std::uint64_t rows =
        export_dataset(tensor, table, FeatureMode::full3n, ExportFormat::jsonl, file);

    std::ifstream in(file);
    std::string line;
    std::uint64_t seen = 0;
    while (std::getline(in, line)) {
        const auto row = nlohmann::json::parse(line);
        const int i = row["i"], j = row["j"], k = row["k"];
        CHECK(row["b"].get<double>() == b_of_triple(table, i, j, k));
        CHECK(row["g"].get<std::uint64_t>() == tensor.at_sorted(i, j, k));
        CHECK(row["nonzero"].get<bool>() == (tensor.at_sorted(i, j, k) != 0));
        CHECK(row["features"].size() == 15);
        ++seen;
    }
    CHECK(seen == rows);
}

TEST_CASE("export with verification recomputes a sample cleanly") {
    TempDir dir;
    const auto chars = character_table(6, false);
    const auto tensor = kronecker_tensor(chars);
    const auto table = b_loadings(6);
    const std::uint64_t rows = export_dataset(tensor, table, FeatureMode::bsum1,
                                              ExportFormat::csv, dir.path / "v.csv", &chars, 42);
    CHECK(rows == 286);
}

TEST_CASE("character table cache round-trip is exact") {
    TempDir dir;
    const fs::path file = dir.path / "table.bin";
    const CharacterTable original = character_table(10, false);
    save_character_table(original, file);
    const CharacterTable loaded = load_character_table(file);
    CHECK(loaded.n == original.n);
    CHECK(loaded.chi == original.chi);
    for (int c = 0; c < original.p(); ++c) {
        CHECK(loaded.classes[static_cast<std::size_t>(c)].centralizer ==
              original.classes[static_cast<std::size_t>(c)].centralizer);
        CHECK(loaded.classes[static_cast<std::size_t>(c)].size ==
              original.classes[static_cast<std::size_t>(c)].size);
    }
}

TEST_CASE("tensor and b-table caches round-trip bit-exactly") {
    TempDir dir;
    const auto tensor = kronecker_tensor(9);
    save_tensor(tensor, dir.path / "t.bin");
    const auto tensor2 = load_tensor(dir.path / "t.bin");
    CHECK(tensor2.coeffs == tensor.coeffs);
    CHECK(tensor2.total_triples == tensor.total_triples);

    const auto table = b_loadings(13);
    save_b_table(table, dir.path / "b.bin");
    const auto table2 = load_b_table(dir.path / "b.bin");
    CHECK(table2.eigenvalue == table.eigenvalue);
    CHECK(table2.w == table.w);
    CHECK(table2.b == table.b);
    CHECK(table2.mean_b3 == table.mean_b3);
    CHECK(table2.std_b3 == table.std_b3);
}

TEST_CASE("corrupt caches are rejected, never reused") {
    TempDir dir;
    const fs::path file = dir.path / "table.bin";
    save_character_table(character_table(6, false), file);

    SUBCASE("truncation") {
        fs::resize_file(file, fs::file_size(file) - 9);
        CHECK_THROWS_AS(load_character_table(file), CacheIntegrityError);
    }
    SUBCASE("version bump") {
        std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(4);
        const char version2[4] = {2, 0, 0, 0};
        f.write(version2, 4);
        f.close();
        CHECK_THROWS_AS(load_character_table(file), CacheVersionError);
    }
    SUBCASE("bad magic") {
        std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("XXXX", 4);
        f.close();
        CHECK_THROWS_AS(load_character_table(file), CacheIntegrityError);
    }
    SUBCASE("payload corruption") {
        std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(16);  // first chi entry
        const char junk[8] = {42, 0, 0, 0, 0, 0, 0, 0};
        f.write(junk, 8);
        f.close();
        CHECK_THROWS_AS(load_character_table(file), CacheIntegrityError);
    }
}

TEST_CASE("histogram counts") {
    const std::vector<double> values{1.0, 2.0, 3.0, 10.0};
    const std::vector<std::uint64_t> weights{1, 1, 1, 1};
    const Histogram one = histogram(values, weights, {}, 1);
    REQUIRE(one.all.size() == 1);
    CHECK(one.all[0] == 4);

    const std::vector<std::uint8_t> labels{1, 0, 1, 0};
    const Histogram split = histogram(values, weights, labels, 3);
    for (std::size_t b = 0; b < split.all.size(); ++b)
        CHECK(split.all[b] == split.zero[b] + split.nonzero[b]);

    CHECK_THROWS_AS(histogram({}, {}, {}, 3), std::invalid_argument);
    CHECK_THROWS_AS(histogram(values, weights, {}, 0), std::invalid_argument);
}

TEST_CASE("zero-class mass sits at higher b than non-zero mass for n = 12") {
    const auto tensor = kronecker_tensor(12);
    const auto table = b_loadings(12);
    const LabeledDataset data = make_dataset(tensor, table);
    double zero_sum = 0.0, nz_sum = 0.0;
    std::uint64_t zero_w = 0, nz_w = 0;
    for (const DataRow& row : data.rows) {
        if (row.nonzero) {
            nz_sum += row.b * row.weight;
            nz_w += row.weight;
        } else {
            zero_sum += row.b * row.weight;
            zero_w += row.weight;
        }
    }
    CHECK(zero_sum / static_cast<double>(zero_w) > nz_sum / static_cast<double>(nz_w));
}

TEST_CASE("cli: partitions and bload print the reference values") {
    std::string out;
    REQUIRE(run({"partitions", "-n", "6"}, &out) == 0);
    CHECK(out.find("6\n") == 0);
    CHECK(out.find("3 2 1") != std::string::npos);
    CHECK(out.rfind("1 1 1 1 1 1\n") == out.size() - 12);

    REQUIRE(run({"bload", "-n", "6"}, &out) == 0);
    CHECK(out.find("100.00") != std::string::npos);
    CHECK(out.find("37.25") != std::string::npos);
    CHECK(out.find("43.01") != std::string::npos);
    CHECK(out.find("0.00") != std::string::npos);
}

TEST_CASE("cli: errors exit with code 1 and print usage") {
    std::string out, err;
    CHECK(run({"frobnicate"}, &out, &err) == 1);
    CHECK_FALSE(err.empty());
    CHECK(run({"bload", "--bogus-flag"}, &out, &err) == 1);
    CHECK(run({"bload"}, &out, &err) == 1);        // missing -n
    CHECK(run({"bload", "-n", "2"}, &out, &err) == 1);  // degenerate n
    CHECK(run({"tensor", "-n", "17"}, &out, &err) == 1);
}

TEST_CASE("cli: count-below endpoints") {
    std::string out;
    REQUIRE(run({"count-below", "-n", "6", "--threshold", "301"}, &out) == 0);
    CHECK(out.find("count 1331\n") != std::string::npos);
    CHECK(out.find("ratio 1.000000") != std::string::npos);
    REQUIRE(run({"count-below", "-n", "6", "--threshold", "0"}, &out) == 0);
    CHECK(out.find("count 0\n") != std::string::npos);
}

TEST_CASE("cli: eval and report are byte-stable across thread counts") {
    std::string one, many;
    REQUIRE(run({"eval", "-n", "8", "--predictor", "f2", "--threads", "1"}, &one) == 0);
    REQUIRE(run({"eval", "-n", "8", "--predictor", "f2", "--threads", "4"}, &many) == 0);
    CHECK(one == many);
    CHECK(one.find("accuracy") != std::string::npos);

    REQUIRE(run({"report", "-n", "8", "--threads", "1"}, &one) == 0);
    REQUIRE(run({"report", "-n", "8", "--threads", "4"}, &many) == 0);
    CHECK(one == many);
}

TEST_CASE("cli: cache round trip through the cache directory") {
    TempDir dir;
    std::string out1, out2, err;
    const std::vector<std::string> args{"tensor", "-n", "6", "--cache-dir", dir.path.string()};
    REQUIRE(run(args, &out1) == 0);
    CHECK(fs::exists(dir.path / "tensor_n6.bin"));
    REQUIRE(run(args, &out2) == 0);
    CHECK(out1 == out2);

    // A corrupt cache aborts the command instead of being recomputed in place.
    {
        std::fstream f(dir.path / "tensor_n6.bin", std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("XXXX", 4);
    }
    const auto before = fs::last_write_time(dir.path / "tensor_n6.bin");
    CHECK(run(args, &out2, &err) == 1);
    CHECK(err.find("magic") != std::string::npos);
    CHECK(fs::last_write_time(dir.path / "tensor_n6.bin") == before);
}

TEST_CASE("cli: export subcommand writes the requested file") {
    TempDir dir;
    const fs::path file = dir.path / "out.csv";
    std::string out;
    REQUIRE(run({"export", "-n", "5", "--mode", "ends18", "--out", file.string(), "--verify"},
                &out) == 0);
    CHECK(out.find("rows 84") != std::string::npos);  // multichoose(7, 3) = 84 at p(5) = 7
    CHECK(fs::exists(file));
}

TEST_CASE("cli: hist writes labeled per-class counts") {
    std::string out;
    REQUIRE(run({"hist", "-n", "6", "--bins", "5"}, &out) == 0);
    CHECK(out.find("bin_lo,bin_hi,count_all,count_zero,count_nonzero") == 0);
    std::uint64_t total = 0;
    std::istringstream ss(out);
    std::string line;
    std::getline(ss, line);
    while (std::getline(ss, line)) {
        const auto cells = split_csv(line);
        REQUIRE(cells.size() == 5);
        total += std::stoull(cells[2]);
        CHECK(std::stoull(cells[2]) == std::stoull(cells[3]) + std::stoull(cells[4]));
    }
    CHECK(total == 1331);
}
