from fastapi import FastAPI, HTTPException

from . import handlers
from . import models as m

app = FastAPI(title="oblab", version="0.1.0")


def _call(fn, req):
    try:
        return fn(req)
    except (KeyError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/family", response_model=m.FamilyResponse)
def family(req: m.FamilyRequest):
    return _call(handlers.family, req)


@app.post("/web", response_model=m.WebResponse)
def web(req: m.WebRequest):
    return _call(handlers.web, req)


@app.post("/orbit", response_model=m.OrbitResponse)
def orbit(req: m.OrbitRequest):
    return _call(handlers.orbit, req)


@app.post("/periods", response_model=m.PeriodsResponse)
def periods(req: m.PeriodsRequest):
    return _call(handlers.periods, req)


@app.post("/ring", response_model=m.RingResponse)
def ring(req: m.RingRequest):
    return _call(handlers.ring, req)


@app.post("/df", response_model=m.DfResponse)
def df(req: m.DfRequest):
    return _call(handlers.df, req)


@app.post("/quasi", response_model=m.QuasiResponse)
def quasi(req: m.QuasiRequest):
    return _call(handlers.quasi, req)


@app.post("/verify", response_model=m.VerifyResponse)
def verify(req: m.VerifyRequest):
    return _call(handlers.verify, req)
