// Single-page console wiring. All state lives on the service; the page can
// always be reconstructed from the stored request id alone.

import { ApiClient, ApiError } from './api.js';
import { buildPlanView, formsFromPlan, validateForm } from './model.js';
import { renderFormErrors, renderPlanView, renderProblem } from './render.js';
import type { RecommendationResponse, RescuePointForm } from './types.js';

const POLL_INTERVAL_MS = 5000;
const STORAGE_KEY = 'evacalloc.request_id';

interface Elements {
  forms: HTMLElement;
  plan: HTMLElement;
  problems: HTMLElement;
  addRow: HTMLButtonElement;
  submit: HTMLButtonElement;
  accept: HTMLButtonElement;
  revise: HTMLButtonElement;
}

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

function rowTemplate(form?: RescuePointForm): string {
  return `<fieldset class="point-row">
    <label>address <input name="address" value="${form?.address ?? ''}" /></label>
    <label>people <input name="nb_people" type="number" min="0" value="${form?.nb_people ?? 0}" /></label>
    <label>non-ambulatory <input name="nb_disabled" type="number" min="0" value="${form?.nb_disabled ?? 0}" /></label>
    <label>priority <input name="priority" type="number" min="1" value="${form?.priority ?? 1}" /></label>
    <span class="row-errors"></span>
  </fieldset>`;
}

function readForms(container: HTMLElement): { forms: RescuePointForm[]; valid: boolean } {
  const forms: RescuePointForm[] = [];
  let valid = true;
  container.querySelectorAll<HTMLFieldSetElement>('.point-row').forEach((row) => {
    const value = (name: string) =>
      row.querySelector<HTMLInputElement>(`input[name="${name}"]`)!.value;
    const form: RescuePointForm = {
      address: value('address'),
      nb_people: Number(value('nb_people')),
      nb_disabled: Number(value('nb_disabled')),
      priority: Number(value('priority')),
    };
    const errors = validateForm(form);
    row.querySelector('.row-errors')!.innerHTML = renderFormErrors(errors);
    if (errors.length) valid = false;
    forms.push(form);
  });
  return { forms, valid };
}

export function startConsole(baseUrl: string): void {
  const api = new ApiClient(baseUrl);
  const ui: Elements = {
    forms: el('forms'),
    plan: el('plan'),
    problems: el('problems'),
    addRow: el('add-row'),
    submit: el('submit'),
    accept: el('accept'),
    revise: el('revise'),
  };
  let current: RecommendationResponse | null = null;
  let pollTimer: number | undefined;

  function setDecisionButtons(): void {
    const open = current !== null && current.decided === null;
    ui.accept.disabled = !open;
    ui.revise.disabled = !open;
    ui.forms
      .querySelectorAll<HTMLInputElement>('input')
      .forEach((input) => (input.disabled = current?.decided === 'accept'));
  }

  function show(response: RecommendationResponse): void {
    current = response;
    localStorage.setItem(STORAGE_KEY, response.request_id);
    ui.plan.innerHTML = renderPlanView(
      buildPlanView(response.plan),
      response.request_id,
      response.decided,
    );
    setDecisionButtons();
  }

  function showError(err: unknown): void {
    if (err instanceof ApiError) {
      ui.problems.innerHTML = renderProblem(err.problem);
    } else {
      ui.problems.innerHTML = renderProblem({
        code: 'client_error',
        message: String(err),
        details: {},
      });
    }
  }

  async function submit(): Promise<void> {
    ui.problems.innerHTML = '';
    const { forms, valid } = readForms(ui.forms);
    if (!valid || forms.length === 0) return; // inline errors shown, nothing sent
    try {
      for (const form of forms) {
        await api.upsertRescuePoint(form);
      }
      show(await api.requestRecommendations(forms));
    } catch (err) {
      showError(err);
    }
  }

  async function accept(): Promise<void> {
    if (!current) return;
    try {
      await api.accept(current.request_id);
      show(await api.getRecommendation(current.request_id));
    } catch (err) {
      showError(err);
    }
  }

  async function revise(): Promise<void> {
    if (!current) return;
    // re-open the forms pre-filled with the solved specs, then resubmit
    ui.forms.innerHTML = formsFromPlan(current.plan).map(rowTemplate).join('\n');
    const { forms, valid } = readForms(ui.forms);
    if (!valid) return;
    try {
      show(await api.revise(current.request_id, forms));
    } catch (err) {
      showError(err);
    }
  }

  async function poll(): Promise<void> {
    if (!current) return;
    try {
      const fresh = await api.getRecommendation(current.request_id);
      if (fresh.decided !== current.decided) show(fresh);
    } catch {
      // transient poll failures are ignored; the next tick retries
    }
  }

  ui.addRow.addEventListener('click', () => {
    ui.forms.insertAdjacentHTML('beforeend', rowTemplate());
  });
  ui.submit.addEventListener('click', () => void submit());
  ui.accept.addEventListener('click', () => void accept());
  ui.revise.addEventListener('click', () => void revise());

  ui.forms.innerHTML = rowTemplate();
  setDecisionButtons();

  const stored = localStorage.getItem(STORAGE_KEY);
  if (stored) {
    api
      .getRecommendation(stored)
      .then(show)
      .catch(() => localStorage.removeItem(STORAGE_KEY));
  }
  pollTimer = window.setInterval(() => void poll(), POLL_INTERVAL_MS);
  window.addEventListener('beforeunload', () => window.clearInterval(pollTimer));
}
