// End-to-end: the console's client/view-model against a real running service
// seeded with the flood scenario. Exercises only the published HTTP API.

import { ChildProcess, spawn } from 'node:child_process';
import { dirname, resolve } from 'node:path';
import { fileURLToPath } from 'node:url';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import { buildPlanView, formsFromPlan } from '../src/model.js';
import { renderPlanView } from '../src/render.js';
import type { RescuePointForm } from '../src/types.js';

const PORT = 8901;
const BASE = `http://127.0.0.1:${PORT}`;
const REPO_ROOT = resolve(dirname(fileURLToPath(import.meta.url)), '..', '..');

let service: ChildProcess;
const api = new ApiClient(BASE);

const FORMS: RescuePointForm[] = [
  { address: '17 Winston Churchill Street, Compiègne', nb_people: 100, nb_disabled: 0, priority: 1 },
  { address: '8 Solferino Bridge Street, Compiègne', nb_people: 72, nb_disabled: 0, priority: 2 },
];

beforeAll(async () => {
  service = spawn(
    'python3',
    ['-m', 'evacalloc.cli', 'serve', '--scenario', 'scenarios/compiegne-flood',
     '--port', String(PORT)],
    { cwd: REPO_ROOT, stdio: 'ignore' },
  );
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      await api.health();
      return;
    } catch {
      if (Date.now() > deadline) throw new Error('service did not come up');
      await new Promise((r) => setTimeout(r, 200));
    }
  }
}, 40_000);

afterAll(() => {
  service?.kill('SIGINT');
});

describe('decision-maker console flow', () => {
  it('renders two cards in priority order with full coverage bars', async () => {
    for (const form of FORMS) {
      const { id } = await api.upsertRescuePoint(form);
      expect(id).toMatch(/^RescuePoint_/);
    }
    const response = await api.requestRecommendations(FORMS);
    expect(response.plan.status).toBe('optimal');

    const view = buildPlanView(response.plan);
    expect(view.cards).toHaveLength(2);
    expect(view.cards.map((c) => c.priority)).toEqual([1, 2]);
    expect(view.cards.every((c) => c.coverage === 1)).toBe(true);

    const html = renderPlanView(view, response.request_id, response.decided);
    const first = html.indexOf('data-priority="1"');
    const second = html.indexOf('data-priority="2"');
    expect(first).toBeGreaterThan(-1);
    expect(second).toBeGreaterThan(first);
    expect(html.match(/width: 100%/g)).toHaveLength(2);
  });

  it('revising 72 -> 60 people yields an objective no worse than before', async () => {
    const before = await api.requestRecommendations(FORMS);
    const revised = formsFromPlan(before.plan).map((form) =>
      form.nb_people === 72 ? { ...form, nb_people: 60 } : form,
    );
    const after = await api.revise(before.request_id, revised);
    expect(after.request_id).not.toBe(before.request_id);
    expect(after.plan.objective_s).toBeLessThanOrEqual(before.plan.objective_s + 1e-9);
    // the original is terminally decided now
    await expect(api.accept(before.request_id)).rejects.toMatchObject({
      problem: { code: 'already_decided' },
    });
  });

  it('accept locks the request against further decisions', async () => {
    const response = await api.requestRecommendations(FORMS);
    const ack = await api.accept(response.request_id);
    expect(ack.dispatched_resources.length).toBe(response.plan.vehicles_used);

    const reloaded = await api.getRecommendation(response.request_id);
    expect(reloaded.decided).toBe('accept');
    const html = renderPlanView(buildPlanView(reloaded.plan), reloaded.request_id, reloaded.decided);
    expect(html).toContain('vehicles dispatched');

    try {
      await api.accept(response.request_id);
      expect.unreachable('second accept must fail');
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).problem.code).toBe('already_decided');
      expect((err as ApiError).status).toBe(409);
    }
  });

  it('a reload reconstructs the identical view from the persisted response', async () => {
    const response = await api.requestRecommendations([FORMS[0]]);
    const again = await api.getRecommendation(response.request_id);
    expect(again).toEqual(response);
    expect(renderPlanView(buildPlanView(again.plan), again.request_id, again.decided)).toBe(
      renderPlanView(buildPlanView(response.plan), response.request_id, response.decided),
    );
  });
});
