from hlab.mellin.engine import conv1d, convolve_fast, convolve_oracle, richardson_check
from hlab.mellin.grid import LogGrid, SampledDensity, plan_grids
