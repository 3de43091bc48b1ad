#include "config.hpp"

#include <cstdlib>

namespace cmll {

namespace {

long env_long(const char* name, long dflt)
{
    const char* v = std::getenv(name);
    if (!v || !*v)
        return dflt;
    char* end = nullptr;
    long x = std::strtol(v, &end, 10);
    if (end == v || *end)
        throw ValidationError(std::string(name) + " is not an integer");
    return x;
}

} // namespace

Config Config::from_env()
{
    Config c;
    c.bits = env_long("CMLL_BITS", c.bits);
    c.prec = static_cast<int>(env_long("CMLL_PREC", c.prec));
    c.deg = static_cast<int>(env_long("CMLL_DEG", c.deg));
    c.cap_norm = Int(env_long("CMLL_CAP_NORM", 1000000));
    c.validate();
    return c;
}

void Config::validate() const
{
    if (bits < 64 || prec < 1 || deg < 2 || cap_norm <= 0 || cap_group <= 0)
        throw ValidationError("configuration values must be positive (bits >= 64, deg >= 2)");
}

} // namespace cmll
