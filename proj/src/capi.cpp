#include "cmll/cmll.h"

#include "commands.hpp"
#include "rayclass.hpp"
#include "selftest.hpp"

#include <cstring>
#include <memory>
#include <sstream>

using namespace cmll;

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

cmll_status set_error(const std::exception& e)
{
    g_last_error = e.what();
    if (dynamic_cast<const ValidationError*>(&e))
        return CMLL_ERR_INVALID;
    if (dynamic_cast<const InternalError*>(&e))
        return CMLL_ERR_INTERNAL;
    return CMLL_ERR_INTERNAL;
}

} // namespace

struct cmll_field {
    FieldCtx ctx;
};

struct cmll_ideal {
    FracIdeal I;
};

struct cmll_rayclass {
    FieldCtx ctx;
    std::unique_ptr<ClassGroup> cg;
    std::unique_ptr<RayClassGroup> G;
};

extern "C" {

const char* cmll_version(void)
{
    return "1.0.0";
}

const char* cmll_last_error(void)
{
    return g_last_error.c_str();
}

void cmll_free_string(char* s)
{
    std::free(s);
}

cmll_status cmll_field_create(long d, cmll_field** out)
{
    if (!out)
        return CMLL_ERR_INVALID;
    try {
        *out = new cmll_field{make_field(Int(d))};
        return CMLL_OK;
    } catch (const std::exception& e) {
        *out = nullptr;
        return set_error(e);
    }
}

void cmll_field_free(cmll_field* f)
{
    delete f;
}

cmll_status cmll_field_disc(const cmll_field* f, long* disc)
{
    if (!f || !disc)
        return CMLL_ERR_INVALID;
    *disc = f->ctx.disc().get_si();
    return CMLL_OK;
}

cmll_status cmll_field_unit_count(const cmll_field* f, int* w)
{
    if (!f || !w)
        return CMLL_ERR_INVALID;
    *w = f->ctx.w();
    return CMLL_OK;
}

cmll_status cmll_ideal_parse(const cmll_field* f, const char* spec, cmll_ideal** out)
{
    if (!f || !spec || !out)
        return CMLL_ERR_INVALID;
    try {
        std::vector<KElem> gens;
        std::istringstream in(spec);
        std::string cur;
        while (std::getline(in, cur, ';'))
            if (!cur.empty())
                gens.push_back(FieldCtx::parse_elem(cur));
        if (gens.empty())
            throw ValidationError("empty ideal specification");
        *out = new cmll_ideal{FracIdeal::from_gens(f->ctx, gens)};
        return CMLL_OK;
    } catch (const std::exception& e) {
        *out = nullptr;
        return set_error(e);
    }
}

void cmll_ideal_free(cmll_ideal* I)
{
    delete I;
}

cmll_status cmll_ideal_mul(const cmll_field* f, const cmll_ideal* I, const cmll_ideal* J,
                           cmll_ideal** out)
{
    if (!f || !I || !J || !out)
        return CMLL_ERR_INVALID;
    try {
        *out = new cmll_ideal{FracIdeal::mul(f->ctx, I->I, J->I)};
        return CMLL_OK;
    } catch (const std::exception& e) {
        *out = nullptr;
        return set_error(e);
    }
}

cmll_status cmll_ideal_inv(const cmll_field* f, const cmll_ideal* I, cmll_ideal** out)
{
    if (!f || !I || !out)
        return CMLL_ERR_INVALID;
    try {
        *out = new cmll_ideal{I->I.inv(f->ctx)};
        return CMLL_OK;
    } catch (const std::exception& e) {
        *out = nullptr;
        return set_error(e);
    }
}

int cmll_ideal_equal(const cmll_ideal* I, const cmll_ideal* J)
{
    if (!I || !J)
        return 0;
    return I->I == J->I ? 1 : 0;
}

cmll_status cmll_ideal_norm(const cmll_ideal* I, char** out)
{
    if (!I || !out)
        return CMLL_ERR_INVALID;
    *out = dup_string(I->I.norm().get_str());
    return CMLL_OK;
}

cmll_status cmll_ideal_json(const cmll_ideal* I, char** out)
{
    if (!I || !out)
        return CMLL_ERR_INVALID;
    std::ostringstream os;
    os << "{\"hnf\":[" << I->I.a() << "," << I->I.b() << "," << I->I.c() << "],\"den\":"
       << I->I.den() << "}";
    *out = dup_string(os.str());
    return CMLL_OK;
}

cmll_status cmll_ideal_principal_generator(const cmll_field* f, const cmll_ideal* I, char** out)
{
    if (!f || !I || !out)
        return CMLL_ERR_INVALID;
    try {
        auto g = is_principal(f->ctx, I->I);
        *out = g ? dup_string(FieldCtx::format(*g)) : nullptr;
        return CMLL_OK;
    } catch (const std::exception& e) {
        *out = nullptr;
        return set_error(e);
    }
}

cmll_status cmll_rayclass_create(const cmll_field* f, const cmll_ideal* conductor,
                                 cmll_rayclass** out)
{
    if (!f || !conductor || !out)
        return CMLL_ERR_INVALID;
    try {
        auto G = std::make_unique<cmll_rayclass>();
        G->ctx = f->ctx;
        G->cg = std::make_unique<ClassGroup>(G->ctx);
        G->G = std::make_unique<RayClassGroup>(G->ctx, conductor->I, *G->cg);
        *out = G.release();
        return CMLL_OK;
    } catch (const std::exception& e) {
        *out = nullptr;
        return set_error(e);
    }
}

void cmll_rayclass_free(cmll_rayclass* G)
{
    delete G;
}

cmll_status cmll_rayclass_order(const cmll_rayclass* G, long* order)
{
    if (!G || !order)
        return CMLL_ERR_INVALID;
    *order = G->G->order();
    return CMLL_OK;
}

cmll_status cmll_rayclass_bracket(const cmll_rayclass* G, const cmll_ideal* a, long* cls)
{
    if (!G || !a || !cls)
        return CMLL_ERR_INVALID;
    try {
        *cls = G->G->bracket_ideal(a->I);
        return CMLL_OK;
    } catch (const std::exception& e) {
        return set_error(e);
    }
}

cmll_status cmll_run(int argc, const char* const* argv, char** json_out)
{
    if (argc < 0 || (argc > 0 && !argv) || !json_out)
        return CMLL_ERR_INVALID;
    std::vector<std::string> args(argv, argv + argc);
    CommandResult res = run_command(args);
    *json_out = dup_string(res.output);
    if (res.exit_code == 0)
        return CMLL_OK;
    g_last_error = res.output;
    if (res.exit_code == 2)
        return CMLL_ERR_USAGE;
    if (res.exit_code == 3)
        return CMLL_ERR_INVALID;
    if (res.exit_code == 1)
        return CMLL_ERR_SELFTEST;
    return CMLL_ERR_INTERNAL;
}

cmll_status cmll_selftest(int* all_pass, char** json_out)
{
    if (!all_pass || !json_out)
        return CMLL_ERR_INVALID;
    try {
        SelftestReport rep = run_selftest();
        *all_pass = rep.all_pass ? 1 : 0;
        *json_out = dup_string(rep.to_json(false));
        return CMLL_OK;
    } catch (const std::exception& e) {
        *all_pass = 0;
        *json_out = nullptr;
        return set_error(e);
    }
}

} // extern "C"
