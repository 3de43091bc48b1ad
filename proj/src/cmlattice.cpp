#include "cmlattice.hpp"

#include <algorithm>
#include <set>

namespace cmll {

// --- TorsionModule -----------------------------------------------------------

TorsionModule::TorsionModule(const FieldCtx& ctx, const FracIdeal& lattice, const FracIdeal& f,
                             const Int& enum_cap)
    : ctx_(&ctx), small_(lattice), f_(f)
{
    if (lattice.is_zero())
        throw ValidationError("torsion of the zero lattice");
    if (!f.is_integral())
        throw ValidationError("torsion conductor must be integral");
    big_ = FracIdeal::mul(ctx, f.inv(ctx), lattice);
    if (f.norm_int() > enum_cap)
        throw ValidationError("torsion module too large to enumerate");
    auto [b1, b2] = big_.basis(ctx);
    b1_ = b1;
    b2_ = b2;
    auto [s1, s2] = small_.basis(ctx);
    auto c1 = lattice_coords(ctx, big_, s1);
    auto c2 = lattice_coords(ctx, big_, s2);
    std::vector<Col2> cols{{c1.first, c1.second}, {c2.first, c2.second}};
    hnf2(std::move(cols), ha_, hb_, hc_);
    if (ha_ * hc_ != f.norm_int())
        throw InternalError("torsion index does not equal Nf");
    for (Int v = 0; v < hc_; ++v)
        for (Int u = 0; u < ha_; ++u) {
            KElem rep = ctx.k_add(ctx.k_mul(b1_, KElem{QuadInt{u, 0}, 1}),
                                  ctx.k_mul(b2_, KElem{QuadInt{v, 0}, 1}));
            index_[{u, v}] = static_cast<long>(reps_.size());
            reps_.push_back(rep);
        }
    gen_ = KElem{QuadInt{0, 0}, 1}; // computed lazily via generator()
}

std::pair<Int, Int> TorsionModule::coords_mod(const KElem& z) const
{
    auto [u, v] = lattice_coords(*ctx_, big_, z);
    Int vv = mod_floor(v, hc_);
    Int k = (v - vv) / hc_;
    Int uu = mod_floor(u - k * hb_, ha_);
    return {uu, vv};
}

KElem TorsionModule::reduce(const KElem& z) const
{
    auto [u, v] = coords_mod(z);
    return reps_[index_.at({u, v})];
}

long TorsionModule::index_of(const KElem& z) const
{
    auto [u, v] = coords_mod(z);
    return index_.at({u, v});
}

KElem TorsionModule::add(const KElem& x, const KElem& y) const
{
    return reduce(ctx_->k_add(x, y));
}

KElem TorsionModule::smul(const QuadInt& r, const KElem& x) const
{
    return reduce(ctx_->k_mul(KElem{r, 1}, x));
}

bool TorsionModule::is_cyclic_generator(const KElem& g) const
{
    ResidueRing R(*ctx_, f_);
    std::set<long> orbit;
    for (const auto& r : R.elements())
        orbit.insert(index_of(ctx_->k_mul(KElem{r, 1}, g)));
    return static_cast<Int>(static_cast<long>(orbit.size())) == size();
}

const KElem& TorsionModule::generator() const
{
    if (!gen_.is_zero() || size() == 1)
        return gen_;
    for (const auto& rep : reps_) {
        if (rep.is_zero())
            continue;
        if (is_cyclic_generator(rep)) {
            gen_ = rep;
            return gen_;
        }
    }
    throw InternalError("torsion module has no cyclic generator");
}

QuadInt TorsionModule::dlog(const KElem& z) const
{
    auto [u, v] = coords_mod(z);
    auto it = dlog_cache_.find({u, v});
    if (it != dlog_cache_.end())
        return it->second;
    const KElem& g = generator();
    ResidueRing R(*ctx_, f_);
    for (const auto& r : R.elements()) {
        auto cm = coords_mod(ctx_->k_mul(KElem{r, 1}, g));
        dlog_cache_.emplace(cm, r);
    }
    it = dlog_cache_.find({u, v});
    if (it == dlog_cache_.end())
        throw InternalError("torsion dlog failed (module not cyclic?)");
    return it->second;
}

// --- level structures ----------------------------------------------------------

std::vector<LeveledCurve> level_structures(const FieldCtx& ctx, const CMLattice& E,
                                           const FracIdeal& f)
{
    ResidueRing R(ctx, f);
    std::vector<LeveledCurve> out;
    for (const auto& u : R.units())
        out.push_back({E.lattice, u});
    return out;
}

LeveledCurve tensor_with_canonical(const FieldCtx& ctx, const FracIdeal& f,
                                   const LeveledCurve& E, const FracIdeal& a)
{
    if (!a.is_integral() || !is_coprime(ctx, a, f))
        throw ValidationError("canonical level structure needs an integral ideal coprime to f");
    ResidueRing R(ctx, f);
    TorsionModule T(ctx, E.lattice, f);
    FracIdeal big = T.big(); // f^-1 c
    auto W = mul_with_witness(ctx, big, a);
    FracIdeal latp = FracIdeal::mul(ctx, E.lattice, a);
    TorsionModule Tp(ctx, latp, f);
    const KElem& gp = Tp.generator();
    auto [m1, m2] = lattice_coords(ctx, W.product, gp);
    // g' = sum_idx w_idx * (e_i * alpha_j), with e basis of f^-1 c, alpha of a
    auto [e1, e2] = big.basis(ctx);
    auto [al1, al2] = a.basis(ctx);
    std::array<KElem, 2> evec{e1, e2}, avec{al1, al2};
    QuadInt acc{0, 0};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Int w = m1 * W.expr[0][2 * i + j] + m2 * W.expr[1][2 * i + j];
            if (w == 0)
                continue;
            QuadInt rho = T.dlog(T.reduce(evec[i]));
            QuadInt alres = R.reduce_elem(avec[j]);
            acc = R.add(acc, R.mul(QuadInt{w, 0}, R.mul(rho, alres)));
        }
    QuadInt unew = R.mul(E.unit_image, acc);
    if (!R.is_unit(unew))
        throw InternalError("tensored level structure is not surjective");
    return {latp, unew};
}

// --- ModuliSet -------------------------------------------------------------------

ModuliSet::ModuliSet(const FieldCtx& ctx, const RayClassGroup& G) : ctx_(&ctx), G_(&G)
{
    for (int k = 0; k < G.class_group().h(); ++k)
        for (long q = 0; q < G.coset_count(); ++q)
            classes_.push_back({G.class_reps()[k], G.coset_unit(q)});
    table_.assign(G.order(), std::vector<long>(classes_.size(), -1));
    for (long e = 0; e < G.order(); ++e)
        for (size_t x = 0; x < classes_.size(); ++x) {
            FracIdeal a = G.canonical_ideal(e);
            LeveledCurve moved = tensor_with_canonical(ctx, G.conductor(), classes_[x], a);
            table_[e][x] = classify(moved);
        }
}

long ModuliSet::classify(const LeveledCurve& E) const
{
    const FieldCtx& ctx = *ctx_;
    const FracIdeal& f = G_->conductor();
    ResidueRing R(ctx, f);
    for (int k = 0; k < G_->class_group().h(); ++k) {
        const FracIdeal& rep = G_->class_reps()[k];
        auto gamma = is_principal(ctx, FracIdeal::mul(ctx, E.lattice, rep.inv(ctx)));
        if (!gamma)
            continue;
        // E = C/(gamma * rep); transport the level structure along z = gamma^-1
        TorsionModule Tlat(ctx, E.lattice, f);
        TorsionModule Trep(ctx, rep, f);
        KElem moved = ctx.k_mul(*gamma, Trep.generator());
        QuadInt rho = Tlat.dlog(Tlat.reduce(moved));
        QuadInt up = R.mul(E.unit_image, rho);
        long q = G_->coset_of_unit(up);
        return static_cast<long>(k) * G_->coset_count() + q;
    }
    throw InternalError("moduli classification failed");
}

long ModuliSet::act(long elem, long cls) const
{
    return table_[elem][cls];
}

CheckReport ModuliSet::certify() const
{
    CheckReport rep;
    long n = size();
    long g = G_->order();
    if (n != g)
        rep.fail("|M^(f)| != |CL^(f)|");
    for (long e = 0; e < g; ++e) {
        std::set<long> image;
        for (long x = 0; x < n; ++x) {
            long y = table_[e][x];
            image.insert(y);
            ++rep.checked;
            if ((y == x) != (e == G_->identity()))
                rep.fail("action is not free at element " + std::to_string(e));
        }
        if (static_cast<long>(image.size()) != n)
            rep.fail("action is not a bijection at element " + std::to_string(e));
    }
    // transitivity: orbit of class 0
    std::set<long> orbit;
    for (long e = 0; e < g; ++e)
        orbit.insert(table_[e][0]);
    if (static_cast<long>(orbit.size()) != n)
        rep.fail("action is not transitive");
    // compatibility with the group law
    for (long e1 = 0; e1 < g; ++e1)
        for (long e2 = 0; e2 < g; ++e2) {
            long e12 = G_->mul(e1, e2);
            for (long x = 0; x < std::min<long>(n, 4); ++x) {
                if (table_[e1][table_[e2][x]] != table_[e12][x])
                    rep.fail("action does not compose with the group law");
            }
        }
    return rep;
}

// --- ghost family -----------------------------------------------------------------

GhostFamily ghost_family(const FieldCtx& ctx, const CMLattice& E, const Int& bound)
{
    GhostFamily fam{E.lattice, {}};
    for (const auto& a : ideals_up_to_norm(ctx, bound))
        fam.comps.push_back({a, FracIdeal::mul(ctx, a.inv(ctx), E.lattice)});
    return fam;
}

CheckReport ghost_family_checks(const FieldCtx& ctx, const CMLattice& E, const Int& bound,
                                const Int& pair_bound)
{
    CheckReport rep;
    GhostFamily fam = ghost_family(ctx, E, bound);
    for (const auto& comp : fam.comps) {
        ++rep.checked;
        TorsionModule ker(ctx, E.lattice, comp.a);
        if (ker.size() != comp.a.norm_int())
            rep.fail("kernel of phi^a has wrong size at a = " + comp.a.str());
        if (comp.a.is_one() && comp.lattice != E.lattice)
            rep.fail("identity component is not E");
    }
    // composition law on lattices
    auto pool = ideals_up_to_norm(ctx, pair_bound);
    for (const auto& a : pool)
        for (const auto& b : pool) {
            if (a.norm_int() * b.norm_int() > pair_bound)
                continue;
            ++rep.checked;
            FracIdeal ab = FracIdeal::mul(ctx, a, b);
            FracIdeal direct = FracIdeal::mul(ctx, ab.inv(ctx), E.lattice);
            FracIdeal steps =
                FracIdeal::mul(ctx, b.inv(ctx), FracIdeal::mul(ctx, a.inv(ctx), E.lattice));
            if (direct != steps)
                rep.fail("composition law fails at (" + a.str() + ", " + b.str() + ")");
            TorsionModule ker(ctx, E.lattice, ab);
            if (ker.size() != ab.norm_int())
                rep.fail("kernel of the composite has wrong size");
        }
    return rep;
}

TorsionModule component_torsion(const FieldCtx& ctx, const CMLattice& E, const FracIdeal& a,
                                const FracIdeal& m)
{
    return TorsionModule(ctx, FracIdeal::mul(ctx, a.inv(ctx), E.lattice), m);
}

bool torsion_map_commutes(const FieldCtx& ctx, const CMLattice& E, const FracIdeal& a,
                          const FracIdeal& m, const std::vector<long>& sigma, const QuadInt& u)
{
    TorsionModule src(ctx, E.lattice, m);
    TorsionModule dst = component_torsion(ctx, E, a, m);
    if (sigma.size() != static_cast<size_t>(dst.size().get_si()))
        throw ValidationError("sigma has the wrong size");
    for (const auto& x : src.reps()) {
        long via_map = sigma[dst.index_of(x)]; // phi^a(x) = x in C/(a^-1 c)
        long via_mult = dst.index_of(ctx.k_mul(KElem{u, 1}, x));
        if (via_map != via_mult)
            return false;
    }
    return true;
}

CheckReport ghost_rigidity_check(const FieldCtx& ctx, const CMLattice& E, const QuadInt& u,
                                 const Int& bound)
{
    CheckReport rep;
    // check u is a unit
    bool is_unit_u = false;
    for (const auto& e : ctx.unit_group())
        if (e == u)
            is_unit_u = true;
    if (!is_unit_u)
        throw ValidationError("rigidity seed must be a unit of O_K");
    // smallest separating conductor
    FracIdeal f0 = FracIdeal::one(ctx);
    for (Int n = 2;; ++n) {
        bool found = false;
        for (const auto& c : ideals_of_norm(ctx, n))
            if (separates_units(ctx, c)) {
                f0 = c;
                found = true;
                break;
            }
        if (found)
            break;
        if (n > 1000)
            throw InternalError("no separating conductor found");
    }
    for (const auto& a : ideals_up_to_norm(ctx, bound)) {
        ++rep.checked;
        FracIdeal m = FracIdeal::mul(ctx, a, f0);
        TorsionModule dst = component_torsion(ctx, E, a, m);
        // candidate family members are automorphisms of the component, i.e.
        // global units; commutation forces epsilon = u.
        std::vector<QuadInt> forced;
        for (const auto& eps : ctx.unit_group()) {
            std::vector<long> sigma(dst.reps().size());
            for (size_t i = 0; i < dst.reps().size(); ++i)
                sigma[i] = dst.index_of(ctx.k_mul(KElem{eps, 1}, dst.reps()[i]));
            if (torsion_map_commutes(ctx, E, a, m, sigma, u))
                forced.push_back(eps);
        }
        if (forced.size() != 1 || forced[0] != u)
            rep.fail("component at " + a.str() + " is not forced to multiplication by u");
    }
    return rep;
}

// --- composite checks ----------------------------------------------------------------

CheckReport torsor_eval_check(const FieldCtx& ctx, const ClassGroup& cg, const Int& corpus_bound)
{
    CheckReport rep;
    for (const auto& ci : cg.reps())
        for (const auto& cj : cg.reps()) {
            ++rep.checked;
            CMLattice Ei{ci}, Ej{cj};
            FracIdeal h = hom_ideal(ctx, Ei, Ej);
            if (serre_tensor(ctx, Ei, h).lattice != cj)
                rep.fail("evaluation identity fails between " + ci.str() + " and " + cj.str());
        }
    for (const auto& rep_lat : cg.reps()) {
        CMLattice E{rep_lat};
        for (const auto& b : ideals_up_to_norm(ctx, corpus_bound)) {
            ++rep.checked;
            if (hom_ideal(ctx, E, serre_tensor(ctx, E, b)) != b)
                rep.fail("hom_ideal(E, E tensor b) != b at b = " + b.str());
            FracIdeal binv = b.inv(ctx);
            if (hom_ideal(ctx, E, serre_tensor(ctx, E, binv)) != binv)
                rep.fail("hom_ideal fails at a fractional ideal");
        }
    }
    return rep;
}

CheckReport kernel_size_check(const FieldCtx& ctx, const ClassGroup& cg, const Int& bound)
{
    CheckReport rep;
    for (const auto& rep_lat : cg.reps()) {
        for (const auto& a : ideals_up_to_norm(ctx, bound)) {
            ++rep.checked;
            TorsionModule T(ctx, rep_lat, a);
            if (T.size() != a.norm_int())
                rep.fail("|E[a]| != Na at a = " + a.str());
        }
    }
    return rep;
}

} // namespace cmll
