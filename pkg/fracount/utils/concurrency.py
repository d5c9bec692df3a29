# -*- coding: utf-8 -*-
# File: concurrency.py

import atexit
import multiprocessing as mp
import platform
import signal
import weakref
import psutil

from .argtools import log_once


__all__ = ['available_parallelism', 'ensure_proc_terminate', 'enable_death_signal',
           'mask_sigint', 'ordered_map']


def available_parallelism():
    """
    Returns:
        int: number of CPUs this process may run on.
    """
    try:
        return max(1, len(psutil.Process().cpu_affinity()))
    except (AttributeError, NotImplementedError, psutil.Error):
        # cpu_affinity is not available on macOS
        return max(1, psutil.cpu_count() or 1)


def ensure_proc_terminate(proc):
    """
    Make sure processes (or a pool) terminate when main process exit.

    Args:
        proc (multiprocessing.Process, multiprocessing.pool.Pool or list)
    """
    if isinstance(proc, list):
        for p in proc:
            ensure_proc_terminate(p)
        return

    def stop_proc_by_weak_ref(ref):
        proc = ref()
        if proc is None:
            return
        proc.terminate()
        proc.join()

    atexit.register(stop_proc_by_weak_ref, weakref.ref(proc))


def enable_death_signal(_warn=True):
    """
    Set the "death signal" of the current process, so that
    the current process will be cleaned with guarantee
    in case the parent dies accidentally.
    """
    if platform.system() != 'Linux':
        return
    try:
        import prctl    # pip install python-prctl
    except ImportError:
        if _warn:
            log_once('"import prctl" failed! Install python-prctl so that processes can be cleaned with guarantee.',
                     'warn')
        return
    else:
        assert hasattr(prctl, 'set_pdeathsig'), \
            "prctl.set_pdeathsig does not exist! Note that you need to install 'python-prctl' instead of 'prctl'."
        # is SIGHUP a good choice?
        prctl.set_pdeathsig(signal.SIGHUP)


def mask_sigint():
    """
    Ignore SIGINT in the calling process. Workers use this so that Ctrl-C
    is handled once, by the coordinator.
    """
    signal.signal(signal.SIGINT, signal.SIG_IGN)


def _worker_init():
    mask_sigint()
    enable_death_signal(_warn=False)


def ordered_map(func, items, num_proc, progress=None):
    """
    Map ``func`` over ``items`` with a process pool, yielding results in input order.

    The order of results never depends on scheduling, so any reduction over
    them is deterministic regardless of ``num_proc``.

    Args:
        func (callable): a picklable top-level function.
        items (list): picklable arguments.
        num_proc (int): number of worker processes. 1 runs inline, without a pool.
        progress: optional tqdm-like object, updated once per finished item.

    Yields:
        func(item) for each item, in order.
    """
    if num_proc <= 1 or len(items) <= 1:
        for it in items:
            yield func(it)
            if progress is not None:
                progress.update()
        return
    ctx = mp.get_context('fork' if platform.system() == 'Linux' else 'spawn')
    pool = ctx.Pool(min(num_proc, len(items)), initializer=_worker_init)
    ensure_proc_terminate(pool)
    try:
        for res in pool.imap(func, items):
            yield res
            if progress is not None:
                progress.update()
        pool.close()
    finally:
        pool.terminate()
        pool.join()
