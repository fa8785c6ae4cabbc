#include "hws/evaluator.hpp"

#include "hws/errors.hpp"
#include "hws/tabular.hpp"

namespace hws {

CsvCurveEvaluator::CsvCurveEvaluator(const std::filesystem::path& curveCsv) {
    const RawTable table = loadCsv(curveCsv, true);
    if (table.nCols() < 2) throw ParseError("curve file needs size and accuracy columns");
    // Expected layout: size,train_accuracy,test_accuracy (test in last column).
    testAccuracy_.assign(table.nRows(), 0.0);
    for (std::size_t r = 0; r < table.nRows(); ++r) {
        const int size = std::stoi(table.rows[r][0]);
        if (size < 1 || static_cast<std::size_t>(size) > table.nRows()) {
            throw ParseError("curve file sizes must be 1..n without gaps");
        }
        testAccuracy_[static_cast<std::size_t>(size - 1)] = std::stod(table.rows[r].back());
    }
}

double CsvCurveEvaluator::evaluateUnits(int hiddenUnits) {
    if (hiddenUnits < 1 || hiddenUnits > maxSize()) {
        throw PreconditionError("size " + std::to_string(hiddenUnits) + " outside recorded sweep 1.." +
                                std::to_string(maxSize()));
    }
    return testAccuracy_[static_cast<std::size_t>(hiddenUnits - 1)];
}

}  // namespace hws
