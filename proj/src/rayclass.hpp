#pragma once

#include "ideals.hpp"

#include <functional>
#include <map>

namespace cmll {

// Finite abelian group utilities over a multiplication closure.
struct AbelianOps {
    long size;
    std::function<long(long, long)> mul;
    long identity;
};
long element_order(const AbelianOps& G, long g);
// Invariant factors n_1 | n_2 | ... | n_r (ascending divisibility).
std::vector<Int> elementary_divisors(const AbelianOps& G);
// Elements realizing G as a direct sum with the given invariant factors,
// chosen greedily from `candidates` by scan order (largest factor first).
// Returns indices into `candidates` or throws if the search fails.
std::vector<long> direct_sum_generators(const AbelianOps& G, const std::vector<Int>& divisors,
                                        const std::vector<long>& candidates);

struct ClassPosition {
    int cls;    // index of the class representative
    KElem gamma; // I = gamma * rep[cls]
};

// The ideal class group, computed by Minkowski-bound enumeration and
// exhaustive principality tests.
class ClassGroup {
public:
    ClassGroup(const FieldCtx& ctx, const Int& order_cap = Int(100000));

    const FieldCtx& ctx() const { return *ctx_; }
    int h() const { return static_cast<int>(reps_.size()); }
    const std::vector<FracIdeal>& reps() const { return reps_; }
    int mul(int i, int j) const { return table_[i][j]; }
    int inv(int i) const { return inv_[i]; }
    const std::vector<Int>& elementary() const { return eldiv_; }

    // Locate the class of a nonzero fractional ideal and a scaling witness.
    ClassPosition position(const FracIdeal& I) const;

private:
    const FieldCtx* ctx_;
    std::vector<FracIdeal> reps_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inv_;
    std::vector<Int> eldiv_;
};

// A level-f structure on a rank one module, after trivialization: the unit
// image of the chosen generator.
struct LevelStructure {
    FracIdeal f;
    QuadInt unit_image;
};

struct IdeleComponent {
    FracIdeal prime;
    long val{0};          // valuation of the component
    QuadInt unit_residue{1, 0}; // unit part, given modulo prime^prec
    int prec{0};
};

struct CheckReport {
    bool pass{true};
    long checked{0};
    std::vector<std::string> failures;
    void fail(const std::string& msg)
    {
        pass = false;
        if (failures.size() < 32)
            failures.push_back(msg);
    }
};

// Ray class group CL^(f), represented as pairs (ideal class, unit coset of
// (O_K/f)^x modulo the image of O_K^x) glued by an explicit 2-cocycle.
class RayClassGroup {
public:
    RayClassGroup(const FieldCtx& ctx, const FracIdeal& f, const ClassGroup& cg,
                  const Int& enum_cap = Int(1000000));

    const FieldCtx& ctx() const { return *ctx_; }
    const FracIdeal& conductor() const { return f_; }
    const ClassGroup& class_group() const { return *cg_; }
    const ResidueRing& ring() const { return ring_; }

    long order() const { return order_; }
    long identity() const { return id_; }
    long mul(long x, long y) const;
    long inv(long x) const;
    long pow(long x, const Int& e) const;
    AbelianOps ops() const;

    // Unit coset data.
    long coset_count() const { return nq_; }
    long coset_of_unit(const QuadInt& u) const;   // u a unit of O_K/f
    long coset_of_elem(const KElem& g) const;     // g coprime to f
    long elem_from(int cls, long coset) const { return cls * nq_ + coset; }
    int class_part(long e) const { return static_cast<int>(e / nq_); }
    long coset_part(long e) const { return e % nq_; }
    // Image of (O_K/f)^x -> CL^(f).
    long unit_map(const QuadInt& u) const { return elem_from(0, coset_of_unit(u)); }
    bool unit_in_image_of_global_units(const QuadInt& u) const;

    // [a]_f for a coprime to f.
    long bracket_ideal(const FracIdeal& a) const;
    // [s]_f for a finite idele; components at p | f must have val = 0 and
    // prec >= v_p(f).
    long bracket_idele(const std::vector<IdeleComponent>& s) const;

    // Canonical ideal representative: least norm, ties by HNF order.
    const FracIdeal& canonical_ideal(long e) const;

    const std::vector<Int>& elementary() const { return eldiv_; }
    // Generator elements with orders matching elementary() (largest first).
    const std::vector<std::pair<long, Int>>& generators() const { return gens_; }
    // Coordinates of e with respect to generators(), 0 <= x_i < n_i.
    std::vector<long> dlog(long e) const;

    // [a]_f trivial iff a has a generator = 1 mod f, over all integral ideals
    // coprime to f of norm <= bound.
    CheckReport kernel_check(const Int& bound) const;

    // Independent order computation: classify ideals coprime to f of norm
    // <= bound by the direct equivalence test (no group machinery).
    long order_by_enumeration(const Int& bound) const;

    const PrimeFactorization& conductor_factors() const { return fact_; }
    int residue_unit_count() const { return static_cast<int>(ring_.units().size()); }
    int global_unit_image_size() const { return nv_; }
    // class representatives coprime to the conductor (index = class part)
    const std::vector<FracIdeal>& class_reps() const { return repf_; }
    QuadInt coset_unit(long q) const { return coset_rep_[q]; }

private:
    const FieldCtx* ctx_;
    FracIdeal f_;
    PrimeFactorization fact_;
    const ClassGroup* cg_;
    ResidueRing ring_;
    OneModTester tester_;
    std::vector<FracIdeal> repf_;        // class reps coprime to f
    std::map<std::pair<Int, Int>, long> unit_index_;
    std::vector<long> coset_id_;          // unit index -> coset
    std::vector<QuadInt> coset_rep_;      // coset -> transversal unit
    std::vector<std::vector<long>> qmul_;
    std::vector<long> qinv_;
    std::vector<std::vector<long>> cocycle_;
    long nq_{1}, order_{1}, id_{0};
    int nv_{1};
    std::vector<Int> eldiv_;
    std::vector<std::pair<long, Int>> gens_;
    std::vector<std::vector<long>> gen_pow_; // powers of each generator
    mutable std::vector<FracIdeal> canon_;
    mutable std::vector<bool> canon_set_;
    mutable Int canon_scan_norm_{0};

    long qclass_of_residue(const QuadInt& r) const;
};

bool separates_units(const FieldCtx& ctx, const FracIdeal& f);

// Finite-level exactness of
//   1 -> im(O_K^x) -> (O_K/f)^x -> CL^(f) -> CL -> 1
// verified by enumeration at every node.
CheckReport exactness_check(const FieldCtx& ctx, const FracIdeal& f, const ClassGroup& cg,
                            const Int& kernel_bound = Int(40));

// Compatibility of the surjection CL^(f') -> CL^(f) with bracket maps, f | f'.
CheckReport surjection_check(const RayClassGroup& Gf, const RayClassGroup& Gfp,
                             const Int& bound = Int(60));

} // namespace cmll
