#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qlef
{

// Base of every domain error. Carries the module that raised it and, when
// meaningful, the curve degree at which the failure happened.
class Error : public std::runtime_error
{
public:
    Error(std::string kind, std::string module, const std::string &what,
          std::optional<std::vector<int>> degree = std::nullopt)
        : std::runtime_error(what), m_kind(std::move(kind)), m_module(std::move(module)),
          m_degree(std::move(degree))
    {
    }

    const std::string &kind() const noexcept
    {
        return m_kind;
    }
    const std::string &module() const noexcept
    {
        return m_module;
    }
    const std::optional<std::vector<int>> &degree() const noexcept
    {
        return m_degree;
    }

private:
    std::string m_kind;
    std::string m_module;
    std::optional<std::vector<int>> m_degree;
};

#define QLEF_DEFINE_ERROR(Name)                                                                    \
    class Name : public Error                                                                      \
    {                                                                                              \
    public:                                                                                        \
        Name(std::string module, const std::string &what,                                          \
             std::optional<std::vector<int>> degree = std::nullopt)                                \
            : Error(#Name, std::move(module), what, std::move(degree))                             \
        {                                                                                          \
        }                                                                                          \
    };

QLEF_DEFINE_ERROR(MismatchError)
QLEF_DEFINE_ERROR(InvalidArgument)
QLEF_DEFINE_ERROR(NonInvertible)
QLEF_DEFINE_ERROR(Unclassifiable)
QLEF_DEFINE_ERROR(Unsupported)
QLEF_DEFINE_ERROR(StructureViolation)
QLEF_DEFINE_ERROR(NotNormalized)
QLEF_DEFINE_ERROR(Infeasible)
QLEF_DEFINE_ERROR(DimensionError)
QLEF_DEFINE_ERROR(DegreeOutOfScope)
QLEF_DEFINE_ERROR(WeightCollision)

#undef QLEF_DEFINE_ERROR

} // namespace qlef
