#pragma once

#include <string>
#include <vector>

#include "twderham/form.hpp"

namespace twd {

/// Expression grammar shared by the CLI and test fixtures:
/// variables by name (x1..x9, t, lambda as the caller allows), integer and
/// rational literals, + - * / ^, parentheses; differentials dx1, dt, ...
/// with ^ acting as wedge between differentials and as exponentiation on
/// 0-forms. Parse errors carry line and column.
Form parse_form(const RingSpec& spec, const std::string& text,
                const std::vector<std::string>& var_names);

/// Same grammar restricted to 0-forms; a result of positive wedge degree
/// is a ParseError.
Poly parse_poly(const RingSpec& spec, const std::string& text,
                const std::vector<std::string>& var_names);

}  // namespace twd
