"""
Corpus Dispatch Handler

Runs verification suites over corpus entries, serially or on a process pool.
Each worker defers its table-cache writes and returns them with its results;
the parent is the only cache writer. Results are merged in manifest order and
suite order regardless of completion order.
"""

import logging
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from src.config.corpus import build_entry
from src.models.reports import CorpusEntry, CorpusManifest, EntryResult, RunReport
from src.services.cache import get_cache
from src.services.errors import GroupInputError, ResourceCapError
from src.tools.suites import SUITES, run_suite

logger = logging.getLogger(__name__)


def _error_results(entry: CorpusEntry, suites: Sequence[str], message: str) -> List[Dict]:
    return [EntryResult(id=entry.id, suite=s, status="error", message=message).model_dump() for s in suites]


def run_entry(entry_data: Dict, suites: Sequence[str], base_dir: Optional[str] = None,
              defer_cache: bool = True) -> Tuple[List[Dict], List[Tuple[str, dict]]]:
    """All requested suites on one entry; returns (results, pending cache writes)."""
    cache = get_cache()
    cache.defer_writes = defer_cache
    entry = CorpusEntry.model_validate(entry_data)
    try:
        built = build_entry(entry, base_dir=base_dir)
    except (GroupInputError, ResourceCapError) as e:
        logger.error(f"[DISPATCH] {entry.id}: cannot build entry: {e}")
        return _error_results(entry, suites, str(e)), cache.drain()

    results = []
    for suite in suites:
        if entry.suites and suite not in entry.suites:
            results.append(EntryResult(id=entry.id, suite=suite, status="skip",
                                       message="suite not listed for this entry").model_dump())
            continue
        try:
            result = run_suite(suite, entry, built)
        except ResourceCapError as e:
            logger.info(f"[DISPATCH] {entry.id}/{suite}: skipped, {e}")
            result = EntryResult(id=entry.id, suite=suite, status="skip", message=str(e))
        except Exception as e:
            logger.error(f"[DISPATCH] {entry.id}/{suite} crashed: {e}", exc_info=True)
            result = EntryResult(id=entry.id, suite=suite, status="error", message=f"{type(e).__name__}: {e}")
        results.append(result.model_dump())
    return results, cache.drain()


def _has_failure(results: List[Dict]) -> bool:
    return any(r["status"] in ("fail", "error") for r in results)


def run_corpus(manifest: CorpusManifest, suites: List[str], manifest_path: Optional[str] = None,
               jobs: int = 1, fail_fast: bool = False, ids: Optional[Sequence[str]] = None) -> RunReport:
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise GroupInputError(f"unknown suite(s): {', '.join(unknown)}", field="suite")
    entries = manifest.entries
    if ids:
        missing = [i for i in ids if manifest.get(i) is None]
        if missing:
            raise GroupInputError(f"no corpus entry with id {', '.join(missing)}", field="id")
        entries = [e for e in entries if e.id in set(ids)]
    for e in entries:
        bad = [s for s in e.suites if s not in SUITES]
        if bad:
            raise GroupInputError(f"entry {e.id} lists unknown suite(s): {', '.join(bad)}", field="suites")
    base_dir = str(Path(manifest_path).resolve().parent) if manifest_path else None
    payloads = [e.model_dump(mode="json") for e in entries]
    logger.info(f"[DISPATCH] {len(entries)} entries x {len(suites)} suites, jobs={jobs}")

    collected: Dict[int, List[Dict]] = {}
    cache = get_cache()
    if jobs <= 1:
        for k, data in enumerate(payloads):
            results, pending = run_entry(data, suites, base_dir, defer_cache=False)
            cache.store_payloads(pending)
            collected[k] = results
            if fail_fast and _has_failure(results):
                break
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(run_entry, data, suites, base_dir): k for k, data in enumerate(payloads)}
            remaining = set(futures)
            while remaining:
                done, remaining = wait(remaining, return_when=FIRST_COMPLETED)
                stop = False
                for future in done:
                    results, pending = future.result()
                    cache.store_payloads(pending)
                    collected[futures[future]] = results
                    stop = stop or (fail_fast and _has_failure(results))
                if stop:
                    for future in remaining:
                        future.cancel()
                    break

    run = RunReport(manifest_version=manifest.version, suites=suites)
    for k in sorted(collected):
        for data in collected[k]:
            result = EntryResult.model_validate(data)
            run.results.append(result)
            tag = f"{result.id}:{result.suite}"
            if result.status in ("fail", "error"):
                run.failures.append(tag)
            elif result.status == "flag":
                run.flagged.append(tag)
    return run
