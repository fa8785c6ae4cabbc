#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "hws/datagen.hpp"
#include "hws/errors.hpp"
#include "hws/tabular.hpp"

using namespace hws;

namespace {

const char* kToyCsv =
    "a,b,y\n"
    "1,10,0\n"
    "2,20,1\n"
    "3,30,0\n"
    "4,40,1\n"
    "5,50,0\n"
    "6,60,1\n"
    "7,70,0\n"
    "8,80,1\n";

ColumnSpecFile toySpecs() {
    return parseColumnSpecText(
        "column a numeric mean\n"
        "column b numeric mean\n"
        "column y label\n");
}

}  // namespace

TEST_CASE("csv parser handles the three-line example") {
    const RawTable t = parseCsvText("a,b\n1,2\n3,4", true);
    CHECK(t.columnNames == std::vector<std::string>{"a", "b"});
    CHECK(t.nRows() == 2);
    CHECK(t.nCols() == 2);
    CHECK(t.rows[1][0] == "3");
}

TEST_CASE("csv parser reports ragged rows with their index") {
    try {
        parseCsvText("a,b\n1,2\n3", true);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
}

TEST_CASE("csv parser rejects empty input") {
    CHECK_THROWS_AS(parseCsvText("", true), ParseError);
    CHECK_THROWS_AS(parseCsvText("\n\n  \n", true), ParseError);
}

TEST_CASE("csv parser honors quoted cells with commas and escaped quotes") {
    const RawTable t = parseCsvText("name,v\n\"Smith, John\",1\n\"say \"\"hi\"\"\",2", true);
    CHECK(t.rows[0][0] == "Smith, John");
    CHECK(t.rows[1][0] == "say \"hi\"");
}

TEST_CASE("titanic-schema sample has the 12 Kaggle columns") {
    const RawTable t = parseCsvText(titanicLikeCsv(50, 7), true);
    CHECK(t.nCols() == 12);
    CHECK(t.columnNames.front() == "PassengerId");
    CHECK(t.columnNames.back() == "Embarked");
    CHECK(t.nRows() == 50);
}

TEST_CASE("column spec parser covers roles, imputation and derives") {
    const ColumnSpecFile f = parseColumnSpecText(
        "# comment\n"
        "derive D first_char C\n"
        "column A numeric constant=1.5\n"
        "column B categorical\n"
        "column C drop\n"
        "column D categorical mode\n"
        "column Y label\n");
    CHECK(f.derives.size() == 1);
    CHECK(f.columns.size() == 5);
    CHECK(f.columns[0].impute == ImputeKind::Constant);
    CHECK(f.columns[0].constantValue == "1.5");
    CHECK(f.columns[1].impute == ImputeKind::Mode);
    CHECK_THROWS_AS(parseColumnSpecText("column A sideways\n"), ParseError);
    CHECK_THROWS_AS(parseColumnSpecText("paint A red\n"), ParseError);
}

TEST_CASE("preprocess splits a toy table in half and standardizes train columns") {
    const RawTable raw = parseCsvText(kToyCsv, true);
    const SplitDataset ds = preprocess(raw, toySpecs(), 0.5, 9);
    CHECK(ds.train.nRows() == 4);
    CHECK(ds.test.nRows() == 4);
    CHECK(ds.train.inputDim == 2);
    CHECK(ds.train.featureNames == std::vector<std::string>{"a", "b"});

    for (std::size_t c = 0; c < 2; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < ds.train.nRows(); ++r) mean += ds.train.row(r)[c];
        mean /= static_cast<double>(ds.train.nRows());
        double var = 0.0;
        for (std::size_t r = 0; r < ds.train.nRows(); ++r) {
            var += (ds.train.row(r)[c] - mean) * (ds.train.row(r)[c] - mean);
        }
        var /= static_cast<double>(ds.train.nRows());
        CHECK(std::fabs(mean) < 1e-6);
        CHECK(std::fabs(std::sqrt(var) - 1.0) < 1e-6);
    }
}

TEST_CASE("preprocess is deterministic") {
    const RawTable raw = parseCsvText(kToyCsv, true);
    const SplitDataset a = preprocess(raw, toySpecs(), 0.5, 42);
    const SplitDataset b = preprocess(raw, toySpecs(), 0.5, 42);
    CHECK(a.train.features == b.train.features);
    CHECK(a.test.features == b.test.features);
    CHECK(a.train.labels == b.train.labels);
}

TEST_CASE("train and test partitions are disjoint and exhaustive") {
    const RawTable raw = parseCsvText(kToyCsv, true);
    const SplitDataset ds = preprocess(raw, toySpecs(), 0.75, 3);
    CHECK(ds.train.nRows() + ds.test.nRows() == raw.nRows());
    CHECK(ds.train.nRows() == 6);
    CHECK(ds.train.featureNames == ds.test.featureNames);
}

TEST_CASE("test-partition statistics never leak into the encoders") {
    std::string csv = "x,y\n";
    for (int i = 0; i < 8; ++i) csv += std::to_string(i) + "," + std::to_string(i % 2) + "\n";
    const RawTable raw = parseCsvText(csv, true);
    const ColumnSpecFile specs = parseColumnSpecText("column x numeric mean\ncolumn y label\n");
    const SplitDataset base = preprocess(raw, specs, 0.5, 1);

    // Discover which raw rows the seed sends to test: perturbing a test row
    // must leave the train features untouched.
    std::vector<bool> inTest(raw.nRows(), false);
    for (std::size_t r = 0; r < raw.nRows(); ++r) {
        RawTable probe = raw;
        probe.rows[r][0] = "1000000";
        inTest[r] = preprocess(probe, specs, 0.5, 1).train.features == base.train.features;
    }
    CHECK(std::count(inTest.begin(), inTest.end(), true) == 4);

    // Shift every test row far out of distribution at once; train encodings
    // (and therefore the standardization statistics) must not move.
    RawTable shifted = raw;
    for (std::size_t r = 0; r < raw.nRows(); ++r) {
        if (inTest[r]) shifted.rows[r][0] = std::to_string(1000 + static_cast<int>(r));
    }
    const SplitDataset moved = preprocess(shifted, specs, 0.5, 1);
    CHECK(moved.train.features == base.train.features);
    CHECK(moved.test.features != base.test.features);
}

TEST_CASE("one-hot groups sum to one per training sample and unseen categories to zero") {
    std::string csv = "color,y\n";
    const char* colors[] = {"red", "green", "blue", "red", "green", "red", "red", "green"};
    for (int i = 0; i < 8; ++i) csv += std::string(colors[i]) + "," + std::to_string(i % 2) + "\n";
    const RawTable raw = parseCsvText(csv, true);
    const ColumnSpecFile specs = parseColumnSpecText("column color categorical\ncolumn y label\n");
    const SplitDataset ds = preprocess(raw, specs, 0.5, 11);

    for (std::size_t r = 0; r < ds.train.nRows(); ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < ds.train.inputDim; ++c) sum += ds.train.row(r)[c];
        CHECK(sum == doctest::Approx(1.0));
    }
    // Test rows may hold a category the train vocabulary never saw; their
    // group sum is then 0. All sums are 0 or 1.
    for (std::size_t r = 0; r < ds.test.nRows(); ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < ds.test.inputDim; ++c) sum += ds.test.row(r)[c];
        CHECK((sum == doctest::Approx(0.0) || sum == doctest::Approx(1.0)));
    }
}

TEST_CASE("label domain and spec errors") {
    const RawTable raw = parseCsvText("x,y\n1,0\n2,1\n3,2\n4,1\n", true);
    const ColumnSpecFile specs = parseColumnSpecText("column x numeric\ncolumn y label\n");
    CHECK_THROWS_AS(preprocess(raw, specs, 0.5, 1), SpecError);

    const RawTable ok = parseCsvText("x,y\n1,0\n2,1\n", true);
    CHECK_THROWS_AS(
        preprocess(ok, parseColumnSpecText("column nope numeric\ncolumn x numeric\ncolumn y label\n"), 0.5, 1),
        SpecError);
    CHECK_THROWS_AS(preprocess(ok, parseColumnSpecText("column x numeric\n"), 0.5, 1), SpecError);
}

TEST_CASE("non-binary string labels map onto 0/1 by sorted order") {
    const RawTable t = parseCsvText("x,y\n1,no\n2,yes\n3,no\n4,yes\n", true);
    const ColumnSpecFile specs = parseColumnSpecText("column x numeric\ncolumn y label\n");
    const SplitDataset ds = preprocess(t, specs, 0.5, 2);
    int positives = 0;
    for (int v : ds.train.labels) positives += v;
    for (int v : ds.test.labels) positives += v;
    CHECK(positives == 2);  // "yes" sorts after "no" and becomes 1
}

TEST_CASE("titanic colspec encodes the sample file with derived cabin features") {
    const RawTable raw = parseCsvText(titanicLikeCsv(400, 21), true);
    const ColumnSpecFile specs = loadColumnSpecs(std::filesystem::path(HWS_DATA_DIR) / "titanic.colspec");
    const SplitDataset ds = preprocess(raw, specs, 0.8, 5);

    CHECK(ds.train.nRows() == 320);
    CHECK(ds.test.nRows() == 80);
    // Groups: Pclass(3) + Sex(2) + Age + SibSp + Parch + Fare + Embarked(3)
    // + CabinDeck(vocab) + HasCabin. The generator draws decks A..G.
    bool hasDeck = false;
    bool hasCabinFlag = false;
    for (const auto& name : ds.train.featureNames) {
        if (name.rfind("CabinDeck=", 0) == 0) hasDeck = true;
        if (name == "HasCabin") hasCabinFlag = true;
    }
    CHECK(hasDeck);
    CHECK(hasCabinFlag);
    CHECK(ds.train.inputDim >= 18);
    // No NaNs survive preprocessing.
    for (double v : ds.train.features) CHECK(std::isfinite(v));
    for (double v : ds.test.features) CHECK(std::isfinite(v));
}

TEST_CASE("churn colspec yields 10 raw predictors and 13 encoded inputs") {
    const RawTable raw = parseCsvText(churnLikeCsv(600, 3), true);
    CHECK(raw.nCols() == 14);
    const ColumnSpecFile specs = loadColumnSpecs(std::filesystem::path(HWS_DATA_DIR) / "churn.colspec");
    int predictors = 0;
    for (const auto& c : specs.columns) {
        if (c.role == ColumnRole::Numeric || c.role == ColumnRole::Categorical) ++predictors;
    }
    CHECK(predictors == 10);

    const SplitDataset ds = preprocess(raw, specs, 0.8, 5);
    CHECK(ds.train.inputDim == 13);  // 8 numeric + Geography(3) + Gender(2)
}

TEST_CASE("digest reports totals and flags an empty test partition") {
    const RawTable raw = parseCsvText(churnLikeCsv(100, 3), true);
    const ColumnSpecFile specs = loadColumnSpecs(std::filesystem::path(HWS_DATA_DIR) / "churn.colspec");
    const SplitDataset ds = preprocess(raw, specs, 0.8, 5);
    const std::string digest = datasetDigest(ds);
    CHECK(digest.find("rows: 100 total") != std::string::npos);
    CHECK(digest.find("80 train / 20 test") != std::string::npos);

    SplitDataset empty = ds;
    empty.test = TabularDataset{};
    empty.test.inputDim = ds.train.inputDim;
    CHECK(datasetDigest(empty).find("empty test partition") != std::string::npos);
}
