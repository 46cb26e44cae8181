#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sublin {

inline constexpr std::uint64_t kDefaultStepBudget = 100'000'000;

/// Raised when a metered computation runs out of steps. Never a "no" answer.
class StepBudgetExhausted : public std::runtime_error {
public:
    explicit StepBudgetExhausted(std::uint64_t budget)
        : std::runtime_error("step budget of " + std::to_string(budget) + " exhausted"), budget_(budget) {}
    std::uint64_t budget() const { return budget_; }

private:
    std::uint64_t budget_;
};

/// Bits needed to index a domain of size d: ceil(log2 d), 0 for d <= 1.
constexpr std::uint64_t bits_for(std::uint64_t d) {
    std::uint64_t b = 0;
    while (b < 64 && (std::uint64_t{1} << b) < d) ++b;
    return b;
}

/// Counted work storage. Only what is allocated here is charged; the input
/// (adjacency oracles, formulas) is read-only and free.
class MeteredWorkspace {
public:
    explicit MeteredWorkspace(std::uint64_t step_budget = kDefaultStepBudget) : budget_(step_budget) {}
    MeteredWorkspace(const MeteredWorkspace&) = delete;
    MeteredWorkspace& operator=(const MeteredWorkspace&) = delete;

    /// Scoped allocation; releases exactly its bits when destroyed.
    class Allocation {
    public:
        Allocation() = default;
        Allocation(Allocation&& o) noexcept : ws_(o.ws_), bits_(o.bits_) { o.ws_ = nullptr; }
        Allocation& operator=(Allocation&& o) noexcept {
            if (this != &o) {
                release();
                ws_ = o.ws_;
                bits_ = o.bits_;
                o.ws_ = nullptr;
            }
            return *this;
        }
        ~Allocation() { release(); }
        std::uint64_t bits() const { return bits_; }

    private:
        friend class MeteredWorkspace;
        Allocation(MeteredWorkspace* ws, std::uint64_t bits) : ws_(ws), bits_(bits) {}
        void release() {
            if (ws_) ws_->live_ -= bits_;
            ws_ = nullptr;
        }
        MeteredWorkspace* ws_ = nullptr;
        std::uint64_t bits_ = 0;
    };

    [[nodiscard]] Allocation allocate(std::uint64_t bits) {
        live_ += bits;
        if (live_ > peak_) peak_ = live_;
        return Allocation(this, bits);
    }

    void step(std::uint64_t n = 1) {
        steps_ += n;
        if (steps_ > budget_) throw StepBudgetExhausted(budget_);
    }

    std::uint64_t live_bits() const { return live_; }
    std::uint64_t peak_bits() const { return peak_; }
    std::uint64_t step_count() const { return steps_; }
    std::uint64_t step_budget() const { return budget_; }

private:
    std::uint64_t live_ = 0;
    std::uint64_t peak_ = 0;
    std::uint64_t steps_ = 0;
    std::uint64_t budget_;
};

}  // namespace sublin
