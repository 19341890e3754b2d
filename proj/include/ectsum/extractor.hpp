#pragma once

#include "ectsum/extractor/checkpoint.hpp"
#include "ectsum/extractor/model.hpp"
#include "ectsum/extractor/params.hpp"
#include "ectsum/extractor/select.hpp"
#include "ectsum/extractor/train.hpp"
