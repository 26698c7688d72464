#pragma once

#include "ncalg/expr.hpp"

#include <json.hpp>
#include <string>

namespace ncalg {

std::string to_text(const Coefficient& c);
std::string to_text(const Word& w);
std::string to_text(const Expr& a);

std::string to_latex(const Word& w);
std::string to_latex(const Expr& a);

nlohmann::json to_json(const Word& w);
nlohmann::json to_json(const Coefficient& c);
nlohmann::json to_json(const Expr& a);
Word word_from_json(const nlohmann::json& j);
Expr expr_from_json(const nlohmann::json& j);

}  // namespace ncalg
