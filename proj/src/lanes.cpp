#include "lyness/lanes.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace lyness {

std::string_view reg_name(Reg r) {
    static constexpr std::array<std::string_view, kRegisterCount> names{
        "X", "W", "Y", "Z", "R1", "R2", "R3", "R4", "R5", "R6", "R7",
        "R8", "R9", "R10", "R11", "X^", "W^", "Y^", "Z^"};
    auto i = static_cast<std::size_t>(r);
    return i < names.size() ? names[i] : std::string_view("?");
}

std::string_view step_cost_name(StepCost c) {
    switch (c) {
        case StepCost::M: return "M";
        case StepCost::C: return "C";
        case StepCost::Free: return "-";
    }
    return "?";
}

namespace {

bool reads_lhs(LaneOpKind k) { return k != LaneOpKind::Idle; }

bool reads_rhs(LaneOpKind k) {
    return k == LaneOpKind::Mul || k == LaneOpKind::Add || k == LaneOpKind::Sub;
}

std::string describe(const LaneOp& op) {
    auto d = std::string(reg_name(op.dst));
    auto l = std::string(reg_name(op.lhs));
    auto r = std::string(reg_name(op.rhs));
    switch (op.kind) {
        case LaneOpKind::Idle: return "idle";
        case LaneOpKind::Mul: return d + " <- " + l + "*" + r;
        case LaneOpKind::MulConstA: return d + " <- a*" + l;
        case LaneOpKind::MulConstB: return d + " <- b*" + l;
        case LaneOpKind::Add: return d + " <- " + l + "+" + r;
        case LaneOpKind::Sub: return d + " <- " + l + "-" + r;
        case LaneOpKind::Double: return d + " <- 2" + l;
        case LaneOpKind::NegDouble: return d + " <- -2" + l;
        case LaneOpKind::Copy: return d + " <- " + l;
    }
    return "?";
}

constexpr LaneOp idle() { return {}; }
constexpr LaneOp mul(Reg d, Reg l, Reg r) { return {LaneOpKind::Mul, d, l, r}; }
constexpr LaneOp mul_a(Reg d, Reg l) { return {LaneOpKind::MulConstA, d, l, Reg::Count}; }
constexpr LaneOp mul_b(Reg d, Reg l) { return {LaneOpKind::MulConstB, d, l, Reg::Count}; }
constexpr LaneOp add(Reg d, Reg l, Reg r) { return {LaneOpKind::Add, d, l, r}; }
constexpr LaneOp sub(Reg d, Reg l, Reg r) { return {LaneOpKind::Sub, d, l, r}; }
constexpr LaneOp twice(Reg d, Reg l) { return {LaneOpKind::Double, d, l, Reg::Count}; }
constexpr LaneOp neg_twice(Reg d, Reg l) { return {LaneOpKind::NegDouble, d, l, Reg::Count}; }
constexpr LaneOp copy(Reg d, Reg l) { return {LaneOpKind::Copy, d, l, Reg::Count}; }

LaneProgram make_addition() {
    using enum Reg;
    LaneProgram p;
    p.name = "2-lane addition";
    p.width = 2;
    p.steps = {
        {mul_a(R1, Y), mul_b(R2, Z)},
        {add(R1, R1, R2), idle()},
        {copy(Xh, Y), copy(Wh, Z)},
        {mul(Yh, W, R1), mul(Zh, X, Z)},
    };
    p.validate();
    return p;
}

LaneProgram make_subtraction() {
    using enum Reg;
    LaneProgram p;
    p.name = "2-lane subtraction";
    p.width = 2;
    p.steps = {
        {mul_a(R1, X), mul_b(R2, W)},
        {add(R1, R1, R2), idle()},
        {copy(Yh, X), copy(Zh, W)},
        {mul(Xh, Z, R1), mul(Wh, Y, W)},
    };
    p.validate();
    return p;
}

LaneProgram make_doubling() {
    using enum Reg;
    LaneProgram p;
    p.name = "4-lane doubling";
    p.width = 4;
    p.requires_unit_a = true;
    p.steps = {
        {mul(R1, X, Z), mul(R2, Y, W), mul(R3, X, Y), mul(R4, W, Z)},
        {add(R5, R1, R2), sub(R6, R1, R2), mul_b(R7, R4), idle()},
        {mul(R1, X, R6), mul(R2, Y, R6), mul(R8, R4, R7), sub(R9, R3, R7)},
        {twice(R1, R1), neg_twice(R2, R2), add(R3, R3, R7), twice(R10, R9)},
        {sub(R3, R3, R4), sub(R7, R10, R5), twice(R8, R8), sub(R11, R9, R4)},
        {add(R9, R7, R6), sub(R10, R7, R6), idle(), idle()},
        {mul(R3, R3, R6), mul(R4, W, R9), mul(R7, Z, R10), mul(R11, R11, R5)},
        {add(R5, R2, R7), add(R6, R1, R4), sub(R11, R11, R8), idle()},
        {add(R7, R11, R3), sub(R8, R11, R3), idle(), idle()},
        {mul(Xh, R7, R9), mul(Wh, R1, R5), mul(Yh, R8, R10), mul(Zh, R2, R6)},
    };
    p.validate();
    return p;
}

}  // namespace

std::vector<StepCost> LaneProgram::cost_profile() const {
    std::vector<StepCost> out;
    out.reserve(steps.size());
    for (const auto& step : steps) {
        StepCost c = StepCost::Free;
        for (const auto& op : step) {
            if (op.kind == LaneOpKind::Mul) c = StepCost::M;
            else if ((op.kind == LaneOpKind::MulConstA || op.kind == LaneOpKind::MulConstB) && c != StepCost::M)
                c = StepCost::C;
        }
        out.push_back(c);
    }
    return out;
}

void LaneProgram::validate() const {
    for (std::size_t s = 0; s < steps.size(); ++s) {
        const auto& step = steps[s];
        auto where = [&] { return name + ", step " + std::to_string(s + 1); };
        if (static_cast<int>(step.size()) > width) throw std::logic_error(where() + ": wider than the program");
        for (std::size_t i = 0; i < step.size(); ++i) {
            const auto& op = step[i];
            if (op.kind == LaneOpKind::Idle) continue;
            if (op.dst == Reg::Count) throw std::logic_error(where() + ": missing destination");
            if (op.dst == Reg::X || op.dst == Reg::W || op.dst == Reg::Y || op.dst == Reg::Z)
                throw std::logic_error(where() + ": input registers are read-only");
            for (std::size_t j = 0; j < step.size(); ++j) {
                if (i == j || step[j].kind == LaneOpKind::Idle) continue;
                const auto& other = step[j];
                if (other.dst == op.dst) throw std::logic_error(where() + ": register written twice");
                bool hazard = (reads_lhs(other.kind) && other.lhs == op.dst) ||
                              (reads_rhs(other.kind) && other.rhs == op.dst);
                if (hazard) throw std::logic_error(where() + ": lane reads a register written in the same step");
            }
        }
    }
}

std::string LaneProgram::to_string() const {
    std::ostringstream os;
    auto profile = cost_profile();
    for (std::size_t s = 0; s < steps.size(); ++s) {
        os << (s + 1 < 10 ? " " : "") << (s + 1) << "  " << step_cost_name(profile[s]);
        for (const auto& op : steps[s]) os << " | " << describe(op);
        os << "\n";
    }
    return os.str();
}

const LaneProgram& addition_program() {
    static const LaneProgram p = make_addition();
    return p;
}

const LaneProgram& subtraction_program() {
    static const LaneProgram p = make_subtraction();
    return p;
}

const LaneProgram& doubling_program() {
    static const LaneProgram p = make_doubling();
    return p;
}

LaneExecutor::LaneExecutor(int workers) : workers_(workers) {
    if (workers != 1 && workers != 2 && workers != 4)
        throw std::invalid_argument("lane workers must be 1, 2 or 4, got " + std::to_string(workers));
    sync_ = std::make_unique<std::barrier<>>(workers);
    lane_tallies_.resize(static_cast<std::size_t>(workers));
    errors_.resize(static_cast<std::size_t>(workers));
    for (int i = 1; i < workers; ++i) threads_.emplace_back([this, i] { worker_loop(i); });
}

LaneExecutor::~LaneExecutor() {
    if (!threads_.empty()) {
        stop_ = true;
        sync_->arrive_and_wait();
        for (auto& t : threads_) t.join();
    }
}

void LaneExecutor::worker_loop(int index) {
    for (;;) {
        sync_->arrive_and_wait();
        if (stop_) return;
        run_lanes(index);
    }
}

void LaneExecutor::run_lanes(int index) {
    auto& tally = lane_tallies_[static_cast<std::size_t>(index)];
    for (const auto& step : program_->steps) {
        for (std::size_t lane = static_cast<std::size_t>(index); lane < step.size();
             lane += static_cast<std::size_t>(workers_)) {
            const auto& op = step[lane];
            if (op.kind == LaneOpKind::Idle || errors_[static_cast<std::size_t>(index)]) continue;
            try {
                const auto& l = regs_[static_cast<std::size_t>(op.lhs)];
                auto& d = regs_[static_cast<std::size_t>(op.dst)];
                switch (op.kind) {
                    case LaneOpKind::Mul: d = ring_mul(l, regs_[static_cast<std::size_t>(op.rhs)], tally); break;
                    case LaneOpKind::MulConstA: d = ring_mul_const(params_->a, l, tally); break;
                    case LaneOpKind::MulConstB: d = ring_mul_const(params_->b, l, tally); break;
                    case LaneOpKind::Add: d = ring_add(l, regs_[static_cast<std::size_t>(op.rhs)], tally); break;
                    case LaneOpKind::Sub: d = ring_sub(l, regs_[static_cast<std::size_t>(op.rhs)], tally); break;
                    case LaneOpKind::Double: d = ring_dbl(l, tally); break;
                    case LaneOpKind::NegDouble: d = ring_neg_dbl(l, tally); break;
                    case LaneOpKind::Copy: d = l; break;
                    case LaneOpKind::Idle: break;
                }
            } catch (...) {
                errors_[static_cast<std::size_t>(index)] = std::current_exception();
            }
        }
        sync_->arrive_and_wait();
    }
}

LaneRun LaneExecutor::run(const LaneProgram& program, const ProjQuad& q, const RingParams& params,
                          CostTally& tally) {
    if (workers_ > program.width) {
        throw std::invalid_argument(program.name + " has " + std::to_string(program.width) +
                                    " lanes, cannot run on " + std::to_string(workers_) + " workers");
    }
    if (program.requires_unit_a && !params.a.is_one())
        throw std::invalid_argument(program.name + " is defined for a = 1 only");

    program_ = &program;
    params_ = &params;
    regs_[static_cast<std::size_t>(Reg::X)] = q.X;
    regs_[static_cast<std::size_t>(Reg::W)] = q.W;
    regs_[static_cast<std::size_t>(Reg::Y)] = q.Y;
    regs_[static_cast<std::size_t>(Reg::Z)] = q.Z;
    std::fill(lane_tallies_.begin(), lane_tallies_.end(), CostTally{});
    std::fill(errors_.begin(), errors_.end(), nullptr);

    if (workers_ > 1) sync_->arrive_and_wait();  // release the workers
    run_lanes(0);

    for (const auto& e : errors_)
        if (e) std::rethrow_exception(e);

    LaneRun out;
    out.lane_depth = program.cost_profile();
    for (const auto& t : lane_tallies_) tally += t;
    for (StepCost c : out.lane_depth) {
        if (c == StepCost::M) ++tally.depth_m;
        else if (c == StepCost::C) ++tally.depth_c;
        else ++tally.depth_free;
    }
    auto reg = [&](Reg r) { return regs_[static_cast<std::size_t>(r)]; };
    out.result = {reg(program.outputs[0]), reg(program.outputs[1]), reg(program.outputs[2]), reg(program.outputs[3])};
    return out;
}

LaneRun run_lane_program(const LaneProgram& program, const ProjQuad& q, const RingParams& params, int lanes,
                         CostTally& tally) {
    LaneExecutor exec(lanes);
    return exec.run(program, q, params, tally);
}

QuadArithmetic::QuadArithmetic(int lanes) : lanes_(lanes) {
    if (lanes != 1 && lanes != 2 && lanes != 4)
        throw std::invalid_argument("lanes must be 1, 2 or 4, got " + std::to_string(lanes));
    if (lanes >= 2) pair_ = std::make_unique<LaneExecutor>(2);
    if (lanes == 4) wide_ = std::make_unique<LaneExecutor>(4);
}

ProjQuad QuadArithmetic::add_P(const ProjQuad& q, const RingParams& params, CostTally& tally) {
    if (!pair_) return proj_add_P(q, params, tally);
    return pair_->run(addition_program(), q, params, tally).result;
}

ProjQuad QuadArithmetic::sub_P(const ProjQuad& q, const RingParams& params, CostTally& tally) {
    if (!pair_) return proj_sub_P(q, params, tally);
    return pair_->run(subtraction_program(), q, params, tally).result;
}

ProjQuad QuadArithmetic::dbl(const ProjQuad& q, const RingParams& params, CostTally& tally) {
    if (!pair_ || !params.a.is_one()) return proj_double(q, params, tally);
    LaneExecutor& exec = wide_ ? *wide_ : *pair_;
    return exec.run(doubling_program(), q, params, tally).result;
}

}  // namespace lyness
