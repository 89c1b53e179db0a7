#pragma once

#include "byzfusion/adversary.hpp"
#include "byzfusion/chernoff.hpp"
#include "byzfusion/commands.hpp"
#include "byzfusion/config.hpp"
#include "byzfusion/detection_model.hpp"
#include "byzfusion/errors.hpp"
#include "byzfusion/fusion_oracle.hpp"
