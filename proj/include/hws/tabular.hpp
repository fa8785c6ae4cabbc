#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hws {

/// A CSV file as text: no typing, no cleaning.
struct RawTable {
    std::vector<std::string> columnNames;
    std::vector<std::vector<std::string>> rows;

    std::size_t nRows() const { return rows.size(); }
    std::size_t nCols() const { return columnNames.size(); }
};

enum class ColumnRole { Drop, Numeric, Categorical, Label };
enum class ImputeKind { Mean, Mode, Constant };

struct ColumnSpec {
    std::string name;
    ColumnRole role = ColumnRole::Drop;
    ImputeKind impute = ImputeKind::Mean;
    std::string constantValue;  // only for ImputeKind::Constant
};

/// Text-level feature derivation applied before roles are resolved.
struct DeriveSpec {
    enum class Fn { FirstChar, NotEmpty };
    std::string name;
    Fn fn = Fn::FirstChar;
    std::string source;
};

struct ColumnSpecFile {
    std::vector<DeriveSpec> derives;
    std::vector<ColumnSpec> columns;
};

/// Fully numeric view of one partition. Features are row-major (rows x M).
struct TabularDataset {
    std::vector<double> features;
    std::vector<int> labels;
    std::vector<std::string> featureNames;
    std::size_t inputDim = 0;

    std::size_t nRows() const { return labels.size(); }
    const double* row(std::size_t r) const { return features.data() + r * inputDim; }
};

struct SplitDataset {
    TabularDataset train;
    TabularDataset test;
    double splitRatio = 0.8;
    std::uint64_t splitSeed = 0;
};

/// Reads a CSV file (comma separated, double-quote quoting, UTF-8).
/// Throws ParseError on ragged rows (naming the row) and on empty input.
RawTable loadCsv(const std::filesystem::path& path, bool hasHeader = true);

/// Same parser over an in-memory string; `origin` is used in error messages.
RawTable parseCsvText(const std::string& text, bool hasHeader, const std::string& origin = "<memory>");

ColumnSpecFile loadColumnSpecs(const std::filesystem::path& path);
ColumnSpecFile parseColumnSpecText(const std::string& text, const std::string& origin = "<memory>");

/// Cleans, encodes, standardizes and splits. Category vocabularies, modes,
/// means and standard deviations all come from the train partition only.
SplitDataset preprocess(const RawTable& raw, const ColumnSpecFile& specs, double splitRatio,
                        std::uint64_t splitSeed);

/// Deterministic human-readable summary for logs.
std::string datasetDigest(const SplitDataset& ds);

}  // namespace hws
