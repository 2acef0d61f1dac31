#ifndef WAVEHOLTZ_ERRORS_HPP
#define WAVEHOLTZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wh
{
    enum class ErrorKind
    {
        InvalidFrequency,
        Configuration,
        Dimension,
        Resonance,
        Divergence,
        Size,
        Numerical,
        Domain,
        DegenerateHistory,
        InvalidBound
    };

    /// Exception carrying a machine readable category. The CLI maps the
    /// category onto its exit code.
    class Error : public std::runtime_error
    {
    public:
        Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), _kind(kind) {}

        ErrorKind kind() const noexcept
        {
            return _kind;
        }

    private:
        ErrorKind _kind;
    };

    inline const char * to_string(ErrorKind kind)
    {
        switch (kind)
        {
        case ErrorKind::InvalidFrequency: return "invalid-frequency";
        case ErrorKind::Configuration: return "configuration";
        case ErrorKind::Dimension: return "dimension";
        case ErrorKind::Resonance: return "resonance";
        case ErrorKind::Divergence: return "divergence";
        case ErrorKind::Size: return "size";
        case ErrorKind::Numerical: return "numerical";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::DegenerateHistory: return "degenerate-history";
        case ErrorKind::InvalidBound: return "invalid-bound";
        }
        return "unknown";
    }

    inline void require_positive_frequency(double omega)
    {
        if (!(omega > 0.0))
            throw Error(ErrorKind::InvalidFrequency, "frequency must be positive, got " + std::to_string(omega));
    }
} // namespace wh

#endif
