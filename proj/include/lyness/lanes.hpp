#pragma once

// Register programs for the parallel addition and doubling schedules.
//
// A program is a list of steps; each step holds up to four lane operations
// that run concurrently, followed by a barrier. Operations in a step only read
// registers produced by earlier steps, and no register is written twice in one
// step, so executing the lanes of a step in any order (or at once) produces
// the same bits.

#include <array>
#include <barrier>
#include <cstdint>
#include <exception>
#include <memory>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "lyness/cost.hpp"
#include "lyness/projective.hpp"

namespace lyness {

enum class Reg : std::uint8_t {
    X, W, Y, Z,
    R1, R2, R3, R4, R5, R6, R7, R8, R9, R10, R11,
    Xh, Wh, Yh, Zh,
    Count,
};

constexpr std::size_t kRegisterCount = static_cast<std::size_t>(Reg::Count);

std::string_view reg_name(Reg r);

enum class LaneOpKind : std::uint8_t {
    Idle,
    Mul,        // dst <- lhs * rhs                  (M)
    MulConstA,  // dst <- a * lhs                    (C, free when a = 1)
    MulConstB,  // dst <- b * lhs                    (C)
    Add,        // dst <- lhs + rhs
    Sub,        // dst <- lhs - rhs
    Double,     // dst <- 2 lhs
    NegDouble,  // dst <- -2 lhs
    Copy,       // dst <- lhs
};

struct LaneOp {
    LaneOpKind kind = LaneOpKind::Idle;
    Reg dst = Reg::Count;
    Reg lhs = Reg::Count;
    Reg rhs = Reg::Count;
};

using LaneStep = std::vector<LaneOp>;

enum class StepCost : std::uint8_t { Free, C, M };

std::string_view step_cost_name(StepCost c);

struct LaneProgram {
    std::string name;
    int width = 0;                  // lanes per step
    bool requires_unit_a = false;   // the schedule has no multiplications by a
    std::vector<LaneStep> steps;
    std::array<Reg, 4> outputs{Reg::Xh, Reg::Wh, Reg::Yh, Reg::Zh};

    /// Cost class of each row: M if any lane multiplies, else C if any lane
    /// multiplies by a constant, else free.
    std::vector<StepCost> cost_profile() const;

    /// Throws std::logic_error on a barrier hazard (a lane reading a register
    /// another lane writes in the same step), a doubly written register, or a
    /// step wider than the program.
    void validate() const;

    /// Renders the program as a table, one row per step.
    std::string to_string() const;
};

/// 2-lane addition of P (four rows; 1M+1C on the critical path).
const LaneProgram& addition_program();
/// 2-lane subtraction of P: the addition schedule with the roles of (X, W)
/// and (Y, Z) exchanged.
const LaneProgram& subtraction_program();
/// 4-lane doubling for a = 1 (ten rows; 4M+1C on the critical path).
const LaneProgram& doubling_program();

struct LaneRun {
    ProjQuad result;
    std::vector<StepCost> lane_depth;
};

/// Runs lane programs on a fixed set of workers with a barrier after every
/// step. The calling thread acts as worker 0; the other workers are threads
/// owned by the executor. One worker executes the lanes sequentially, in lane
/// order, and yields identical bits.
class LaneExecutor {
public:
    /// workers must be 1, 2 or 4.
    explicit LaneExecutor(int workers);
    ~LaneExecutor();

    LaneExecutor(const LaneExecutor&) = delete;
    LaneExecutor& operator=(const LaneExecutor&) = delete;

    int workers() const noexcept { return workers_; }

    /// Throws std::invalid_argument when the program is narrower than the
    /// worker count or needs a = 1 and params.a != 1. The tally receives every
    /// lane's operation counts plus one depth row per step.
    LaneRun run(const LaneProgram& program, const ProjQuad& q, const RingParams& params, CostTally& tally);

private:
    using Registers = std::array<RingElement, kRegisterCount>;

    void worker_loop(int index);
    void run_lanes(int index);

    int workers_;
    std::unique_ptr<std::barrier<>> sync_;
    std::vector<std::jthread> threads_;

    // Current job, published to workers by the start barrier.
    const LaneProgram* program_ = nullptr;
    const RingParams* params_ = nullptr;
    Registers regs_;
    std::vector<CostTally> lane_tallies_;
    std::vector<std::exception_ptr> errors_;
    bool stop_ = false;
};

/// One-shot convenience wrapper: builds an executor with `lanes` workers.
LaneRun run_lane_program(const LaneProgram& program, const ProjQuad& q, const RingParams& params, int lanes,
                         CostTally& tally);

/// Executes add/sub/double either sequentially (lanes = 1) or through the
/// lane programs: additions and subtractions on two workers, doublings on
/// `lanes` workers.
class QuadArithmetic {
public:
    explicit QuadArithmetic(int lanes = 1);

    int lanes() const noexcept { return lanes_; }

    ProjQuad add_P(const ProjQuad& q, const RingParams& params, CostTally& tally);
    ProjQuad sub_P(const ProjQuad& q, const RingParams& params, CostTally& tally);
    ProjQuad dbl(const ProjQuad& q, const RingParams& params, CostTally& tally);

private:
    int lanes_;
    std::unique_ptr<LaneExecutor> pair_;
    std::unique_ptr<LaneExecutor> wide_;
};

}  // namespace lyness
