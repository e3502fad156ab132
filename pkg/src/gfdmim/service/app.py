"""HTTP facade over the sweep engine: synchronous sweeps plus background jobs."""
from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from ..simulate import csv_text, run_sweep
from .jobs import Job, JobStore
from .models import BerPoint, JobInfo, SweepRequest, SweepResponse


def _job_info(job: Job) -> JobInfo:
    records = None
    if job.records is not None:
        records = [BerPoint.from_record(r) for r in job.records]
    return JobInfo(job_id=job.job_id, status=job.status, detail=job.detail,
                   records=records)


def create_app(store: JobStore | None = None) -> FastAPI:
    app = FastAPI(title="gfdmim",
                  description="BER sweep service for multi-user uplink GFDM-IM")
    if store is None:
        store = JobStore()

    def build_config(request: SweepRequest):
        try:
            return request.to_config()
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/sweeps", response_model=SweepResponse)
    def sweep(request: SweepRequest):
        records = run_sweep(build_config(request))
        return SweepResponse(request=request,
                             records=[BerPoint.from_record(r) for r in records])

    @app.post("/jobs", response_model=JobInfo, status_code=202)
    def submit_job(request: SweepRequest):
        return _job_info(store.submit(build_config(request)))

    @app.get("/jobs/{job_id}", response_model=JobInfo)
    def job_status(job_id: str):
        job = store.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="no such job")
        return _job_info(job)

    @app.get("/jobs/{job_id}/csv", response_class=PlainTextResponse)
    def job_csv(job_id: str):
        job = store.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="no such job")
        if job.status != "done":
            raise HTTPException(status_code=409, detail=f"job is {job.status}")
        return csv_text(job.records, job.config)

    return app


app = create_app()
