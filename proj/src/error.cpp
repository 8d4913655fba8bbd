#include "frost/error.hpp"

namespace frost
{
DegenerateElement::DegenerateElement(std::size_t element, double area)
    : Error("element " + std::to_string(element) +
            " is degenerate (signed area " + std::to_string(area) + ")"),
      element_(element)
{
}

ParseError::ParseError(std::size_t line, std::string const& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line)
{
}

StepFailure::StepFailure(std::string const& what, double residual,
                         int iterations)
    : SolverError(what), residual_(residual), iterations_(iterations)
{
}

}  // namespace frost
