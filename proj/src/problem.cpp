#include "mechsynth/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mechsynth {

namespace {

std::vector<GeneBounds> repeat(std::size_t n, GeneBounds b)
{
    return std::vector<GeneBounds>(n, b);
}

void append(std::vector<GeneBounds>& to, const std::vector<GeneBounds>& from)
{
    to.insert(to.end(), from.begin(), from.end());
}

template <typename... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <typename... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

} // namespace

void DEConfig::validate() const
{
    if (np < 4) throw std::invalid_argument("np must be at least 4");
    if (itermax < 1) throw std::invalid_argument("itermax must be at least 1");
    if (!(f >= 0.0) || !std::isfinite(f)) throw std::invalid_argument("f must be a finite non-negative number");
    if (!(cr >= 0.0 && cr <= 1.0)) throw std::invalid_argument("cr must lie in [0, 1]");
    if (!(mp >= 0.0 && mp <= 1.0)) throw std::invalid_argument("mp must lie in [0, 1]");
    if (strategy_id != 6) throw std::invalid_argument("only DE strategy 6 is supported");
}

std::string_view to_string(Mutation mutation)
{
    return mutation == Mutation::EitherOr ? "either-or" : "best1bin";
}

Mutation parse_mutation(std::string_view name)
{
    if (name == "either-or") return Mutation::EitherOr;
    if (name == "best1bin") return Mutation::BestOneBin;
    throw std::invalid_argument("unknown mutation scheme '" + std::string(name) + "' (expected either-or or best1bin)");
}

CaseSpec builtin_case(std::string_view id)
{
    using std::numbers::pi;
    const GeneBounds angle{0.0, 2.0 * pi};

    CaseSpec spec;
    if (id == "1") {
        spec.name = "1";
        spec.targets = {{20, 20}, {20, 25}, {20, 30}, {20, 35}, {20, 40}, {20, 45}};
        spec.angle_mode = GeneAngles{6};
        spec.has_frame = true;
        spec.gene_bounds = repeat(4, {0, 60});
        append(spec.gene_bounds, repeat(2, {-60, 60}));
        spec.gene_bounds.push_back(angle);
        append(spec.gene_bounds, repeat(2, {-60, 60}));
        append(spec.gene_bounds, repeat(6, angle));
        spec.default_de = DEConfig{.np = 100, .itermax = 1000, .f = 0.3, .cr = 0.8, .mp = 0.1, .strategy_id = 6, .mutation = Mutation::EitherOr, .seed = 0, .stop_error = std::nullopt};
    } else if (id == "2" || id == "2r") {
        spec.name = std::string(id);
        spec.targets = {{3.000, 3.000}, {2.759, 3.363}, {2.372, 3.663}, {1.890, 3.862}, {1.355, 3.943}};
        spec.angle_mode = PrescribedAngles{{pi / 6, pi / 4, pi / 3, 5 * pi / 12, pi / 2}};
        spec.has_frame = false;
        if (id == "2") {
            spec.gene_bounds = repeat(4, {0, 50});
            append(spec.gene_bounds, repeat(2, {-50, 50}));
        } else {
            spec.gene_bounds = repeat(6, {0, 5});
        }
        spec.default_de = DEConfig{.np = 50, .itermax = 100, .f = 0.3, .cr = 1.0, .mp = 0.1, .strategy_id = 6, .mutation = Mutation::EitherOr, .seed = 0, .stop_error = std::nullopt};
    } else if (id == "3") {
        spec.name = "3";
        spec.targets = {{0.5, 1.1},   {0.4, 1.1}, {0.3, 1.1}, {0.2, 1.0},  {0.1, 0.9},  {0.005, 0.75},
                        {0.02, 0.6},  {0.0, 0.5}, {0.0, 0.4}, {0.03, 0.3}, {0.1, 0.25}, {0.15, 0.2},
                        {0.2, 0.3},   {0.3, 0.4}, {0.4, 0.5}, {0.5, 0.7},  {0.6, 0.9},  {0.6, 1.0}};
        spec.angle_mode = BaseWithIncrements{pi / 9, 18};
        spec.has_frame = true;
        spec.gene_bounds = repeat(4, {0, 50});
        append(spec.gene_bounds, repeat(2, {-50, 50}));
        spec.gene_bounds.push_back(angle);
        append(spec.gene_bounds, repeat(2, {-50, 50}));
        spec.gene_bounds.push_back(angle);
        spec.default_de = DEConfig{.np = 100, .itermax = 50, .f = 0.05, .cr = 1.0, .mp = 0.1, .strategy_id = 6, .mutation = Mutation::EitherOr, .seed = 0, .stop_error = std::nullopt};
    } else {
        throw std::invalid_argument("unknown built-in case '" + std::string(id) + "' (expected 1, 2, 2r or 3)");
    }
    return spec;
}

std::size_t angle_gene_offset(const CaseSpec& spec)
{
    return kOffsetGene + 2 + (spec.has_frame ? 3 : 0);
}

std::size_t angle_gene_count(const CaseSpec& spec)
{
    return std::visit(Overloaded{
                          [](const GeneAngles& m) { return m.count; },
                          [](const PrescribedAngles&) { return std::size_t{0}; },
                          [](const BaseWithIncrements&) { return std::size_t{1}; },
                      },
                      spec.angle_mode);
}

std::size_t gene_count(const CaseSpec& spec)
{
    return angle_gene_offset(spec) + angle_gene_count(spec);
}

double bar_upper_bound(const CaseSpec& spec)
{
    double high = spec.gene_bounds.at(0).high;
    for (std::size_t i = 1; i < kBarGeneCount; ++i)
        high = std::max(high, spec.gene_bounds.at(i).high);
    return high;
}

void CaseSpec::validate() const
{
    const std::size_t n_angles = std::visit(Overloaded{
                                                [](const GeneAngles& m) { return m.count; },
                                                [](const PrescribedAngles& m) { return m.values.size(); },
                                                [](const BaseWithIncrements& m) { return m.count; },
                                            },
                                            angle_mode);
    if (targets.size() < 2) throw std::invalid_argument("a case needs at least two targets");
    if (n_angles != targets.size())
        throw std::invalid_argument("angle mode yields " + std::to_string(n_angles) + " angles for " +
                                    std::to_string(targets.size()) + " targets");
    if (gene_bounds.size() != gene_count(*this))
        throw std::invalid_argument("expected " + std::to_string(gene_count(*this)) + " gene bounds, got " +
                                    std::to_string(gene_bounds.size()));
    for (const auto& b : gene_bounds)
        if (!(b.low < b.high) || !std::isfinite(b.low) || !std::isfinite(b.high))
            throw std::invalid_argument("every gene bound needs low < high");
    for (const auto& t : targets)
        if (!std::isfinite(t.x) || !std::isfinite(t.y)) throw std::invalid_argument("non-finite target");
    default_de.validate();
}

BarLengths bars_from_genes(const DesignVector& v)
{
    return {v[kCrankGene], v[kCouplerGene], v[kRockerGene], v[kGroundGene]};
}

void store_bars(DesignVector& v, const BarLengths& bars)
{
    v[kCrankGene] = bars.r1;
    v[kCouplerGene] = bars.r2;
    v[kRockerGene] = bars.r3;
    v[kGroundGene] = bars.r4;
}

Decoded decode(const DesignVector& v, const CaseSpec& spec)
{
    const std::size_t expected = gene_count(spec);
    if (v.size() != expected)
        throw std::invalid_argument("design vector has " + std::to_string(v.size()) + " genes, case '" +
                                    spec.name + "' expects " + std::to_string(expected));

    Decoded d;
    d.params.bars = bars_from_genes(v);
    d.params.r_ex = v[kOffsetGene];
    d.params.r_ey = v[kOffsetGene + 1];
    if (spec.has_frame) d.params.pose = {v[kFrameGene], v[kFrameGene + 1], v[kFrameGene + 2]};

    const std::size_t first = angle_gene_offset(spec);
    std::visit(Overloaded{
                   [&](const GeneAngles& m) { d.theta1.assign(v.genes.begin() + first, v.genes.begin() + first + m.count); },
                   [&](const PrescribedAngles& m) { d.theta1 = m.values; },
                   [&](const BaseWithIncrements& m) {
                       d.theta1.resize(m.count);
                       for (std::size_t i = 0; i < m.count; ++i)
                           d.theta1[i] = v[first] + m.increment * static_cast<double>(i);
                   },
               },
               spec.angle_mode);
    return d;
}

DesignVector encode(const MechanismParams& params, std::span<const double> theta1, const CaseSpec& spec)
{
    DesignVector v{std::vector<double>(gene_count(spec), 0.0)};
    store_bars(v, params.bars);
    v[kOffsetGene] = params.r_ex;
    v[kOffsetGene + 1] = params.r_ey;
    if (spec.has_frame) {
        v[kFrameGene] = params.pose.theta0;
        v[kFrameGene + 1] = params.pose.x0;
        v[kFrameGene + 2] = params.pose.y0;
    }
    const std::size_t first = angle_gene_offset(spec);
    const std::size_t n = angle_gene_count(spec);
    if (theta1.size() < n) throw std::invalid_argument("not enough crank angles to encode");
    for (std::size_t i = 0; i < n; ++i)
        v[first + i] = theta1[i];
    return v;
}

BranchErrors branch_errors(const Decoded& d, const CaseSpec& spec)
{
    BranchErrors out;
    for (Branch branch : kBranches) {
        double sum = 0.0;
        for (std::size_t i = 0; i < spec.targets.size(); ++i) {
            const auto p = coupler_point(d.params, d.theta1[i], branch);
            if (!p) {
                sum = kAssemblyFailure;
                break;
            }
            const double dx = spec.targets[i].x - p->x;
            const double dy = spec.targets[i].y - p->y;
            sum += dx * dx + dy * dy;
        }
        if (!std::isfinite(sum)) sum = kAssemblyFailure;
        (branch == Branch::Open ? out.open : out.crossed) = sum;
    }
    return out;
}

BranchErrors branch_errors(const DesignVector& v, const CaseSpec& spec)
{
    return branch_errors(decode(v, spec), spec);
}

double tracking_error(const DesignVector& v, const CaseSpec& spec)
{
    return branch_errors(v, spec).best();
}

ConstraintReport constraint_report(const Decoded& d, const CaseSpec& spec)
{
    ConstraintReport r;
    r.grashof_ok = grashof_satisfied(d.params.bars);
    r.grashof_violation = grashof_violation(d.params.bars);
    r.sequence_ok = !std::holds_alternative<GeneAngles>(spec.angle_mode) || sequence_satisfied(d.theta1);
    return r;
}

ConstraintReport constraint_report(const DesignVector& v, const CaseSpec& spec)
{
    return constraint_report(decode(v, spec), spec);
}

Evaluation evaluate(const DesignVector& v, const CaseSpec& spec, const PenaltyWeights& w)
{
    const Decoded d = decode(v, spec);
    const ConstraintReport report = constraint_report(d, spec);
    Evaluation e;
    e.raw = branch_errors(d, spec).best();
    e.penalty = (report.grashof_ok ? 0.0 : w.w1) + (report.sequence_ok ? 0.0 : w.w2);
    e.penalized = e.raw + e.penalty;
    return e;
}

double penalized_error(const DesignVector& v, const CaseSpec& spec, const PenaltyWeights& w)
{
    return evaluate(v, spec, w).penalized;
}

} // namespace mechsynth
