"""HTTP service: pydantic schemas, handler functions and the FastAPI app.

The app is imported lazily so the CLI can use the handlers without
starting a server.
"""
from . import handlers, models

ROUTES = {
    "family": (handlers.family, models.FamilyRequest),
    "web": (handlers.web, models.WebRequest),
    "orbit": (handlers.orbit, models.OrbitRequest),
    "periods": (handlers.periods, models.PeriodsRequest),
    "ring": (handlers.ring, models.RingRequest),
    "df": (handlers.df, models.DfRequest),
    "quasi": (handlers.quasi, models.QuasiRequest),
    "verify": (handlers.verify, models.VerifyRequest),
}
