"""In-memory job store; sweeps run one at a time on a background thread."""
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from ..simulate import SimConfig, run_sweep


@dataclass
class Job:
    job_id: str
    config: SimConfig
    status: str = "queued"
    detail: Optional[str] = None
    records: Optional[list] = None


class JobStore:
    def __init__(self):
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()
        self._executor = ThreadPoolExecutor(max_workers=1)

    def submit(self, config: SimConfig) -> Job:
        job = Job(uuid.uuid4().hex, config)
        with self._lock:
            self._jobs[job.job_id] = job
        self._executor.submit(self._run, job)
        return job

    def get(self, job_id: str) -> Optional[Job]:
        with self._lock:
            return self._jobs.get(job_id)

    def all(self) -> list[Job]:
        with self._lock:
            return list(self._jobs.values())

    def _run(self, job: Job) -> None:
        with self._lock:
            job.status = "running"
        try:
            records = run_sweep(job.config)
        except Exception as exc:  # surfaced through the job status
            with self._lock:
                job.status, job.detail = "failed", str(exc)
            return
        with self._lock:
            job.status, job.records = "done", records
