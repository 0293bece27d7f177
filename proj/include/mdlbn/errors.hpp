#pragma once

#include <stdexcept>
#include <string>

namespace mdlbn
{

/// Base of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define MDLBN_DEFINE_ERROR(Name)                                                                   \
    class Name : public Error                                                                      \
    {                                                                                              \
    public:                                                                                        \
        using Error::Error;                                                                        \
    }

MDLBN_DEFINE_ERROR(CycleError);
MDLBN_DEFINE_ERROR(InvalidEdge);
MDLBN_DEFINE_ERROR(TooLarge);
MDLBN_DEFINE_ERROR(SizeMismatch);
MDLBN_DEFINE_ERROR(ParseError);
MDLBN_DEFINE_ERROR(EmptyData);
MDLBN_DEFINE_ERROR(SpecMismatch);
MDLBN_DEFINE_ERROR(PolicyMismatch);
MDLBN_DEFINE_ERROR(DomainError);
MDLBN_DEFINE_ERROR(OverlapError);

#undef MDLBN_DEFINE_ERROR

} // namespace mdlbn
