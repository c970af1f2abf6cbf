#pragma once

#include "dendrite/dsl/ast.hpp"
#include "dendrite/dsl/compiler.hpp"
#include "dendrite/dsl/diagnostic.hpp"
#include "dendrite/dsl/format.hpp"
#include "dendrite/dsl/lexer.hpp"
#include "dendrite/dsl/parser.hpp"
