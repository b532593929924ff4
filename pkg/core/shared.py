import os
from dotenv import load_dotenv


load_dotenv()

DEFAULT_TOL = float(os.getenv("PACKING_TOL", "1e-10"))
DEFAULT_MAX_ITER = int(os.getenv("PACKING_MAX_ITER", "100"))
DEFAULT_T_MAX = float(os.getenv("PACKING_T_MAX", "1e5"))
DEFAULT_MAX_STEPS = int(os.getenv("PACKING_MAX_STEPS", "200000"))
DEFAULT_INTEGRATOR = os.getenv("PACKING_INTEGRATOR", "rk4")
DEFAULT_DT_INIT = float(os.getenv("PACKING_DT_INIT", "0.1"))
DEFAULT_FEASIBILITY = os.getenv("PACKING_FEASIBILITY", "flow")
DEFAULT_OUT_DIR = os.getenv("PACKING_OUT", "out")

# Largest |V°| for which subset enumeration is allowed.
ENUMERATION_LIMIT = 20
