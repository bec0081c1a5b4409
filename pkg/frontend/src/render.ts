// HTML string rendering, kept free of DOM state so it is testable in node.

import type { PlanView, PointCard } from './model.js';
import type { Problem } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function formatSeconds(s: number): string {
  return s >= 120 ? `${(s / 60).toFixed(1)} min` : `${s.toFixed(0)} s`;
}

export function renderCard(card: PointCard): string {
  const pct = Math.round(card.coverage * 100);
  const address = card.address
    ? `<span class="address" title="${escapeHtml(card.coordinates ?? '')}">${escapeHtml(card.address)}</span>`
    : '';
  const rows = card.rows
    .map(
      (row) => `<tr>
        <td>${escapeHtml(row.driver)}</td>
        <td>${escapeHtml(row.vehicleClass)}</td>
        <td class="num">${row.seats}</td>
        <td class="num">${formatSeconds(row.arrivalS)}</td>
      </tr>`,
    )
    .join('\n');
  const coverageLabel = card.served
    ? `${card.deliveredSeats}/${card.demandSeats} seats`
    : `UNSERVED, ${card.deficitSeats} seats missing`;
  const shelterLines = card.shelterSummary
    .map((line) => `<li>${escapeHtml(line)}</li>`)
    .join('');
  return `<article class="card ${card.served ? 'served' : 'unserved'}" data-point="${escapeHtml(card.pointId)}" data-priority="${card.priority}">
  <header>
    <h3>${escapeHtml(card.pointId)} <small>priority ${card.priority}</small></h3>
    ${address}
  </header>
  <div class="coverage">
    <div class="coverage-bar" style="width: ${pct}%"></div>
    <span class="coverage-label">${escapeHtml(coverageLabel)}</span>
  </div>
  <table class="vehicles">
    <thead><tr><th>driver</th><th>vehicle</th><th>seats</th><th>arrival</th></tr></thead>
    <tbody>
${rows}
    </tbody>
  </table>
  ${shelterLines ? `<ul class="shelters">${shelterLines}</ul>` : ''}
</article>`;
}

export function renderPlanView(view: PlanView, requestId: string, decided: string | null): string {
  const deficitBanner = view.unservedPointIds.length
    ? `<div class="banner deficit">Not every point can be served: ${view.unservedPointIds
        .map(escapeHtml)
        .join(', ')}. Revise the requirements or free more vehicles.</div>`
    : '';
  const decidedBanner = decided
    ? `<div class="banner decided">Request ${escapeHtml(requestId)} ${escapeHtml(decided)}${
        decided === 'accept' ? ': vehicles dispatched' : ''
      }.</div>`
    : '';
  const notices = [...view.notices, ...view.diagnostics]
    .map((n) => `<li>${escapeHtml(n)}</li>`)
    .join('');
  return `<section class="plan" data-request="${escapeHtml(requestId)}">
  <header class="plan-header">
    <span class="badge status-${view.status}">${view.status}</span>
    <span class="objective">total travel time ${formatSeconds(view.objectiveS)}</span>
    <span class="vehicles-used">${view.vehiclesUsed} vehicles</span>
  </header>
  ${decidedBanner}
  ${deficitBanner}
  ${view.cards.map(renderCard).join('\n')}
  ${notices ? `<ul class="notices">${notices}</ul>` : ''}
</section>`;
}

export function renderProblem(problem: Problem): string {
  return `<div class="banner error" data-code="${escapeHtml(problem.code)}">${escapeHtml(
    problem.message,
  )}</div>`;
}

export function renderFormErrors(errors: string[]): string {
  return errors.length
    ? `<ul class="form-errors">${errors.map((e) => `<li>${escapeHtml(e)}</li>`).join('')}</ul>`
    : '';
}
