#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>

namespace hws {

/// Abstract hidden-size -> accuracy mapping driven by the search algorithms.
/// evaluate() must be deterministic per size and safe to call concurrently;
/// callCount() counts every evaluate() call, cached or not.
class Evaluator {
public:
    virtual ~Evaluator() = default;

    double evaluate(int hiddenUnits) {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return evaluateUnits(hiddenUnits);
    }

    std::uint64_t callCount() const { return calls_.load(std::memory_order_relaxed); }

protected:
    virtual double evaluateUnits(int hiddenUnits) = 0;

private:
    std::atomic<std::uint64_t> calls_{0};
};

class FunctionEvaluator : public Evaluator {
public:
    explicit FunctionEvaluator(std::function<double(int)> fn) : fn_(std::move(fn)) {}

protected:
    double evaluateUnits(int hiddenUnits) override { return fn_(hiddenUnits); }

private:
    std::function<double(int)> fn_;
};

/// Caches by size so repeated sizes cost one underlying evaluation. The
/// base evaluator's own call count then counts distinct evaluations.
class MemoizingEvaluator : public Evaluator {
public:
    explicit MemoizingEvaluator(Evaluator& base) : base_(base) {}

    std::uint64_t missCount() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return misses_;
    }

protected:
    double evaluateUnits(int hiddenUnits) override {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto it = cache_.find(hiddenUnits);
        if (it != cache_.end()) return it->second;
        const double value = base_.evaluate(hiddenUnits);
        cache_.emplace(hiddenUnits, value);
        ++misses_;
        return value;
    }

private:
    Evaluator& base_;
    mutable std::mutex mutex_;
    std::map<int, double> cache_;
    std::uint64_t misses_ = 0;
};

/// Serves a previously recorded sweep (curve.csv) as an Evaluator.
class CsvCurveEvaluator : public Evaluator {
public:
    explicit CsvCurveEvaluator(const std::filesystem::path& curveCsv);

    int maxSize() const { return static_cast<int>(testAccuracy_.size()); }

protected:
    double evaluateUnits(int hiddenUnits) override;

private:
    std::vector<double> testAccuracy_;  // index 0 holds size 1
};

}  // namespace hws
