#include "hws/tabular.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "hws/errors.hpp"
#include "hws/rng.hpp"

namespace hws {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

bool isMissing(const std::string& cell) { return trim(cell).empty(); }

double parseNumericCell(const std::string& cell, const std::string& column, std::size_t rowIndex) {
    const std::string t = trim(cell);
    double value = 0.0;
    const auto result = std::from_chars(t.data(), t.data() + t.size(), value);
    if (result.ec != std::errc() || result.ptr != t.data() + t.size()) {
        throw ParseError("column '" + column + "' row " + std::to_string(rowIndex) +
                         ": cannot parse numeric cell '" + t + "'");
    }
    return value;
}

// Splits one logical CSV record. `pos` points past the record on return.
std::vector<std::string> readRecord(const std::string& text, std::size_t& pos, std::size_t recordIndex,
                                    const std::string& origin) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    while (pos < text.size()) {
        const char c = text[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    cell.push_back('"');
                    pos += 2;
                } else {
                    quoted = false;
                    ++pos;
                }
            } else {
                cell.push_back(c);
                ++pos;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            ++pos;
        } else if (c == ',') {
            cells.push_back(cell);
            cell.clear();
            ++pos;
        } else if (c == '\n') {
            ++pos;
            break;
        } else if (c == '\r') {
            ++pos;  // tolerate CRLF
        } else {
            cell.push_back(c);
            ++pos;
        }
    }
    if (quoted) {
        throw ParseError(origin + ": record " + std::to_string(recordIndex) + " has an unterminated quote");
    }
    cells.push_back(cell);
    return cells;
}

struct LabelCodec {
    std::string zero;
    std::string one;

    int encode(const std::string& value, std::size_t rowIndex) const {
        if (value == zero) return 0;
        if (value == one) return 1;
        throw SpecError("label value '" + value + "' at row " + std::to_string(rowIndex) +
                        " is outside the two-value domain {" + zero + ", " + one + "}");
    }
};

LabelCodec makeLabelCodec(const RawTable& table, std::size_t labelCol, const std::string& columnName) {
    std::vector<std::string> distinct;
    for (const auto& row : table.rows) {
        const std::string v = trim(row[labelCol]);
        if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) {
            distinct.push_back(v);
            if (distinct.size() > 2) break;
        }
    }
    if (distinct.empty() || distinct.size() > 2) {
        throw SpecError("label column '" + columnName + "' must take exactly 1 or 2 distinct values, found " +
                        std::to_string(distinct.size()));
    }
    if (distinct.size() == 1) {
        // Degenerate but well defined; the single value maps onto itself.
        if (distinct[0] == "1") return {"0", "1"};
        return {distinct[0], distinct[0] == "0" ? "1" : distinct[0] + "\x01"};
    }
    std::sort(distinct.begin(), distinct.end());
    return {distinct[0], distinct[1]};
}

}  // namespace

RawTable parseCsvText(const std::string& text, bool hasHeader, const std::string& origin) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw ParseError(origin + ": empty input");
    }
    RawTable table;
    std::size_t pos = 0;
    std::size_t recordIndex = 0;
    while (pos < text.size()) {
        // Skip blank trailing lines.
        const std::size_t lineEnd = text.find('\n', pos);
        const std::string probe = text.substr(pos, lineEnd == std::string::npos ? std::string::npos : lineEnd - pos);
        if (trim(probe).empty()) {
            pos = lineEnd == std::string::npos ? text.size() : lineEnd + 1;
            continue;
        }
        auto cells = readRecord(text, pos, recordIndex, origin);
        if (recordIndex == 0) {
            if (hasHeader) {
                table.columnNames = std::move(cells);
            } else {
                table.columnNames.resize(cells.size());
                for (std::size_t i = 0; i < cells.size(); ++i) table.columnNames[i] = "c" + std::to_string(i);
                table.rows.push_back(std::move(cells));
            }
        } else {
            if (cells.size() != table.nCols()) {
                throw ParseError(origin + ": row " + std::to_string(table.nRows()) + " has " +
                                 std::to_string(cells.size()) + " cells, expected " + std::to_string(table.nCols()));
            }
            table.rows.push_back(std::move(cells));
        }
        ++recordIndex;
    }
    return table;
}

RawTable loadCsv(const std::filesystem::path& path, bool hasHeader) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parseCsvText(buffer.str(), hasHeader, path.filename().string());
}

ColumnSpecFile parseColumnSpecText(const std::string& text, const std::string& origin) {
    ColumnSpecFile file;
    std::istringstream in(text);
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream tokens(t);
        std::string kind;
        tokens >> kind;
        const auto fail = [&](const std::string& why) {
            throw ParseError(origin + ":" + std::to_string(lineNo) + ": " + why);
        };
        if (kind == "column") {
            ColumnSpec spec;
            std::string role;
            std::string impute;
            tokens >> spec.name >> role >> impute;
            if (spec.name.empty() || role.empty()) fail("expected 'column <name> <role> [impute]'");
            if (role == "drop") spec.role = ColumnRole::Drop;
            else if (role == "numeric") spec.role = ColumnRole::Numeric;
            else if (role == "categorical") spec.role = ColumnRole::Categorical;
            else if (role == "label") spec.role = ColumnRole::Label;
            else fail("unknown role '" + role + "'");
            spec.impute = spec.role == ColumnRole::Categorical ? ImputeKind::Mode : ImputeKind::Mean;
            if (!impute.empty()) {
                if (impute == "mean") spec.impute = ImputeKind::Mean;
                else if (impute == "mode") spec.impute = ImputeKind::Mode;
                else if (impute.rfind("constant=", 0) == 0) {
                    spec.impute = ImputeKind::Constant;
                    spec.constantValue = impute.substr(std::string("constant=").size());
                } else fail("unknown imputation '" + impute + "'");
            }
            file.columns.push_back(std::move(spec));
        } else if (kind == "derive") {
            DeriveSpec spec;
            std::string fn;
            tokens >> spec.name >> fn >> spec.source;
            if (spec.name.empty() || fn.empty() || spec.source.empty()) {
                fail("expected 'derive <name> <fn> <source-column>'");
            }
            if (fn == "first_char") spec.fn = DeriveSpec::Fn::FirstChar;
            else if (fn == "not_empty") spec.fn = DeriveSpec::Fn::NotEmpty;
            else fail("unknown derivation '" + fn + "'");
            file.derives.push_back(std::move(spec));
        } else {
            fail("unknown directive '" + kind + "'");
        }
    }
    if (file.columns.empty()) throw ParseError(origin + ": no column directives");
    return file;
}

ColumnSpecFile loadColumnSpecs(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parseColumnSpecText(buffer.str(), path.filename().string());
}

SplitDataset preprocess(const RawTable& raw, const ColumnSpecFile& specs, double splitRatio,
                        std::uint64_t splitSeed) {
    if (!(splitRatio > 0.0 && splitRatio < 1.0)) {
        throw PreconditionError("split ratio must be in (0, 1)");
    }

    // Apply derivations to an extended copy of the table.
    RawTable table = raw;
    for (const auto& d : specs.derives) {
        const auto it = std::find(table.columnNames.begin(), table.columnNames.end(), d.source);
        if (it == table.columnNames.end()) {
            throw SpecError("derive source column '" + d.source + "' does not exist");
        }
        const std::size_t src = static_cast<std::size_t>(it - table.columnNames.begin());
        table.columnNames.push_back(d.name);
        for (auto& row : table.rows) {
            const std::string cell = trim(row[src]);
            switch (d.fn) {
                case DeriveSpec::Fn::FirstChar:
                    row.push_back(cell.empty() ? std::string() : cell.substr(0, 1));
                    break;
                case DeriveSpec::Fn::NotEmpty:
                    row.push_back(cell.empty() ? "0" : "1");
                    break;
            }
        }
    }

    // Match specs against the extended table.
    std::vector<const ColumnSpec*> byColumn(table.nCols(), nullptr);
    for (const auto& spec : specs.columns) {
        const auto it = std::find(table.columnNames.begin(), table.columnNames.end(), spec.name);
        if (it == table.columnNames.end()) {
            throw SpecError("spec names column '" + spec.name + "' which does not exist in the table");
        }
        byColumn[static_cast<std::size_t>(it - table.columnNames.begin())] = &spec;
    }
    std::size_t labelCol = table.nCols();
    for (std::size_t c = 0; c < table.nCols(); ++c) {
        if (byColumn[c] == nullptr) {
            throw SpecError("column '" + table.columnNames[c] + "' has no spec entry");
        }
        if (byColumn[c]->role == ColumnRole::Label) {
            if (labelCol != table.nCols()) throw SpecError("more than one label column");
            labelCol = c;
        }
    }
    if (labelCol == table.nCols()) throw SpecError("no label column");

    const LabelCodec labels = makeLabelCodec(table, labelCol, table.columnNames[labelCol]);

    // Seeded split into train/test row indices.
    std::vector<std::size_t> order(table.nRows());
    std::iota(order.begin(), order.end(), 0);
    rng::Stream splitRng(splitSeed);
    splitRng.shuffle(order);
    const std::size_t nTrain = static_cast<std::size_t>(std::llround(splitRatio * static_cast<double>(table.nRows())));
    std::vector<std::size_t> trainIdx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(nTrain));
    std::vector<std::size_t> testIdx(order.begin() + static_cast<std::ptrdiff_t>(nTrain), order.end());

    // Encoded columns are assembled partition-first as column blocks, then
    // interleaved into row-major feature matrices at the end.
    struct Block {
        std::vector<std::string> names;
        std::vector<std::vector<double>> trainCols;
        std::vector<std::vector<double>> testCols;
    };
    std::vector<Block> blocks;

    for (std::size_t c = 0; c < table.nCols(); ++c) {
        const ColumnSpec& spec = *byColumn[c];
        if (spec.role == ColumnRole::Drop || spec.role == ColumnRole::Label) continue;

        Block block;
        if (spec.role == ColumnRole::Numeric) {
            auto readColumn = [&](const std::vector<std::size_t>& idx) {
                std::vector<double> values(idx.size(), std::numeric_limits<double>::quiet_NaN());
                for (std::size_t i = 0; i < idx.size(); ++i) {
                    const std::string& cell = table.rows[idx[i]][c];
                    if (!isMissing(cell)) values[i] = parseNumericCell(cell, spec.name, idx[i]);
                }
                return values;
            };
            std::vector<double> trainVals = readColumn(trainIdx);
            std::vector<double> testVals = readColumn(testIdx);

            double fill = 0.0;
            if (spec.impute == ImputeKind::Constant) {
                fill = parseNumericCell(spec.constantValue, spec.name, 0);
            } else {
                // Mean of present train cells; mode degrades to mean for numeric data.
                double sum = 0.0;
                std::size_t seen = 0;
                for (double v : trainVals) {
                    if (!std::isnan(v)) {
                        sum += v;
                        ++seen;
                    }
                }
                fill = seen > 0 ? sum / static_cast<double>(seen) : 0.0;
            }
            for (auto* vals : {&trainVals, &testVals}) {
                for (double& v : *vals) {
                    if (std::isnan(v)) v = fill;
                }
            }

            // Standardize with train statistics (population variance).
            double mean = 0.0;
            for (double v : trainVals) mean += v;
            mean = trainVals.empty() ? 0.0 : mean / static_cast<double>(trainVals.size());
            double var = 0.0;
            for (double v : trainVals) var += (v - mean) * (v - mean);
            var = trainVals.empty() ? 0.0 : var / static_cast<double>(trainVals.size());
            const double sd = std::sqrt(var);
            for (auto* vals : {&trainVals, &testVals}) {
                for (double& v : *vals) {
                    v = sd > 1e-12 ? (v - mean) / sd : v - mean;  // constant columns are only centered
                }
            }
            block.names.push_back(spec.name);
            block.trainCols.push_back(std::move(trainVals));
            block.testCols.push_back(std::move(testVals));
        } else {  // Categorical
            auto cellOf = [&](std::size_t row) { return trim(table.rows[row][c]); };

            // Vocabulary and mode come from the train partition only.
            std::map<std::string, std::size_t> counts;
            for (std::size_t row : trainIdx) {
                const std::string v = cellOf(row);
                if (!v.empty()) ++counts[v];
            }
            std::string mode;
            std::size_t best = 0;
            for (const auto& [value, count] : counts) {
                if (count > best) {  // ties resolve to the lexicographically smallest (map order)
                    best = count;
                    mode = value;
                }
            }
            const std::string fill = spec.impute == ImputeKind::Constant ? spec.constantValue : mode;
            if (counts.find(fill) == counts.end() && !fill.empty()) counts.emplace(fill, 0);

            std::vector<std::string> vocab;
            vocab.reserve(counts.size());
            for (const auto& [value, count] : counts) vocab.push_back(value);

            auto encode = [&](const std::vector<std::size_t>& idx, std::vector<std::vector<double>>& cols) {
                cols.assign(vocab.size(), std::vector<double>(idx.size(), 0.0));
                for (std::size_t i = 0; i < idx.size(); ++i) {
                    std::string v = cellOf(idx[i]);
                    if (v.empty()) v = fill;
                    const auto it = std::lower_bound(vocab.begin(), vocab.end(), v);
                    if (it != vocab.end() && *it == v) {
                        cols[static_cast<std::size_t>(it - vocab.begin())][i] = 1.0;
                    }
                    // Unseen test categories stay all-zero.
                }
            };
            encode(trainIdx, block.trainCols);
            encode(testIdx, block.testCols);
            for (const auto& v : vocab) block.names.push_back(spec.name + "=" + v);
        }
        blocks.push_back(std::move(block));
    }

    SplitDataset out;
    out.splitRatio = splitRatio;
    out.splitSeed = splitSeed;

    auto assemble = [&](const std::vector<std::size_t>& idx, bool trainSide) {
        TabularDataset ds;
        for (const auto& block : blocks) {
            for (const auto& name : block.names) ds.featureNames.push_back(name);
        }
        ds.inputDim = ds.featureNames.size();
        ds.features.assign(idx.size() * ds.inputDim, 0.0);
        std::size_t col = 0;
        for (const auto& block : blocks) {
            const auto& cols = trainSide ? block.trainCols : block.testCols;
            for (const auto& column : cols) {
                for (std::size_t i = 0; i < idx.size(); ++i) {
                    ds.features[i * ds.inputDim + col] = column[i];
                }
                ++col;
            }
        }
        ds.labels.reserve(idx.size());
        for (std::size_t row : idx) {
            ds.labels.push_back(labels.encode(trim(table.rows[row][labelCol]), row));
        }
        return ds;
    };
    out.train = assemble(trainIdx, true);
    out.test = assemble(testIdx, false);
    return out;
}

std::string datasetDigest(const SplitDataset& ds) {
    std::ostringstream out;
    const std::size_t total = ds.train.nRows() + ds.test.nRows();
    auto positives = [](const TabularDataset& part) {
        return std::count(part.labels.begin(), part.labels.end(), 1);
    };
    auto pct = [](std::ptrdiff_t num, std::size_t den) {
        if (den == 0) return std::string("n/a");
        std::ostringstream s;
        s.setf(std::ios::fixed);
        s.precision(1);
        s << 100.0 * static_cast<double>(num) / static_cast<double>(den) << "%";
        return s.str();
    };
    out << "rows: " << total << " total (" << ds.train.nRows() << " train / " << ds.test.nRows() << " test)\n";
    out << "input dim: " << ds.train.inputDim << " encoded features\n";
    out << "label balance: train " << pct(positives(ds.train), ds.train.nRows()) << " positive, test "
        << pct(positives(ds.test), ds.test.nRows()) << " positive\n";
    if (ds.test.nRows() == 0) out << "warning: empty test partition\n";
    return out.str();
}

}  // namespace hws
