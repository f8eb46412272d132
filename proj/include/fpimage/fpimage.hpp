#pragma once

#include "fpimage/attacks.hpp"
#include "fpimage/authenticator.hpp"
#include "fpimage/evaluation.hpp"
#include "fpimage/fixed_point.hpp"
#include "fpimage/image.hpp"
#include "fpimage/imageio.hpp"
#include "fpimage/keyschedule.hpp"
#include "fpimage/layout.hpp"
