#pragma once

#include "dendrite/export/json_io.hpp"
#include "dendrite/export/project.hpp"
#include "dendrite/export/stl.hpp"
#include "dendrite/export/svg.hpp"
